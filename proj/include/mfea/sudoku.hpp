#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfea/engine.hpp"

// Sudoku as a permutation-encoded optimization task: rows are hard
// constraints (always permutations of 1..9), columns and 3x3 subgrids are
// soft constraints scored by their number of distinct digits. The engine
// minimizes cost = 162 - raw_fitness, so cost 0 is a solved puzzle.

namespace sudoku {

inline constexpr int kMaxRawFitness = 162;  // 9 columns * 9 + 9 subgrids * 9

struct Grid {
    std::array<std::array<int, 9>, 9> cells{};  // digits 1..9, [row][column]
    bool operator==(const Grid&) const = default;
};

struct Puzzle {
    std::string id;
    std::array<std::array<int, 9>, 9> givens{};  // 0 marks a free cell
    int fixed_count = 0;

    bool is_fixed(int r, int c) const { return givens[r][c] != 0; }
};

using Row = std::array<int, 9>;
using TaskSet = std::vector<Puzzle>;

// Accepts 9 lines of 9 characters or one 81-character line, characters in
// {'1'..'9', '.'}. Rejects ill-posed statements (duplicate given within a
// row, column, or subgrid), naming the offending unit.
Puzzle parse_puzzle(const std::string& text, const std::string& id);
Puzzle load_puzzle_file(const std::string& path);

std::string to_text(const Grid& grid);
std::string givens_text(const Puzzle& puzzle);

// Number of distinct digits summed over the 9 columns and 9 subgrids,
// in [18, 162]. Throws if some row is not a permutation of 1..9.
int raw_fitness(const Grid& grid);

// 162 - raw_fitness. Throws if the grid violates a given of the puzzle.
int evaluate(const Grid& grid, const Puzzle& puzzle);

// Each row: givens at their fixed columns, remaining digits uniformly
// shuffled into the free columns.
Grid random_individual(const Puzzle& puzzle, mfea::Rng& rng);

// Standard PMX on one row; the crossover segment is [cut_a, cut_b),
// 0 <= cut_a < cut_b <= 9.
Row pmx_row(const Row& parent_a, const Row& parent_b, int cut_a, int cut_b);

// Row-wise PMX with independently drawn cuts per row. Child 2 is produced
// with the parent roles swapped, reusing the same cuts.
std::pair<Grid, Grid> pmx_grid(const Grid& parent_a, const Grid& parent_b, mfea::Rng& rng);

// Restores the puzzle's fixed positions: per row, delete one occurrence of
// each given digit (reading left to right), write givens at their fixed
// columns, fill free columns with the remainder in order. Idempotent.
Grid repair(const Grid& grid, const Puzzle& puzzle);

// Swaps two distinct free cells within one uniformly chosen eligible row
// (a row with at least two free columns); no-op when no row is eligible.
Grid mutate(const Grid& grid, const Puzzle& puzzle, mfea::Rng& rng);

// Per-row reading of the swap mutation: each row with at least two free
// columns independently swaps two distinct free cells with probability
// row_probability.
Grid mutate_rows(const Grid& grid, const Puzzle& puzzle, double row_probability, mfea::Rng& rng);

// Deterministic backtracking over cells in row-major order, candidate digits
// ascending; first complete assignment wins.
std::optional<Grid> exact_solve(const Puzzle& puzzle);

// Number of cells on which the two grids agree, in [0, 81].
int solution_similarity(const Grid& a, const Grid& b);

// Base-9 logarithm of the naive candidate count: 81 - fp_focal -
// fp_conditioning, clamped at 0. fp_conditioning = 0 gives the single-task
// size.
int log9_search_space(int fp_focal, int fp_conditioning = 0);

// Two readings of "swap two non-fixed positions in a row, given some
// user-defined mutation probability". per_offspring: the engine fires the
// operator with probability p_m and one row is swapped. per_row: the engine
// fires the operator unconditionally (gate 1.0) and every row swaps
// independently with probability p_m.
enum class MutationScheme { per_offspring, per_row };

// Binds a task list to the engine's hook interface. Task index = position
// in the list; cost 0 means solved. mutation_probability is only read by
// the per_row scheme (the per_offspring gate lives in the engine config).
mfea::TaskHooks<Grid> make_task_hooks(TaskSet tasks,
                                      MutationScheme scheme = MutationScheme::per_offspring,
                                      double mutation_probability = 0.8);

}  // namespace sudoku
