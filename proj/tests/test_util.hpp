#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mfea/engine.hpp"
#include "mfea/sudoku.hpp"

// Shared helpers for the test suites. The generators here are independent
// oracles: they build valid grids/puzzles from first principles (canonical
// pattern + validity-preserving symmetries) rather than through the code
// under test.

namespace testutil {

inline std::string puzzle_dir() {
    if (const char* env = std::getenv("MFEA_PUZZLE_DIR")) return env;
    return "puzzles";
}

inline sudoku::Puzzle load_bundled(const std::string& id) {
    return sudoku::load_puzzle_file(puzzle_dir() + "/" + id + ".sdk");
}

// cells(r,c) = ((3*(r mod 3) + r/3 + c) mod 9) + 1 is a complete valid
// solution (0-based indices).
inline sudoku::Grid canonical_solution() {
    sudoku::Grid g;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            g.cells[r][c] = (3 * (r % 3) + r / 3 + c) % 9 + 1;
    return g;
}

// Random complete valid solution: relabel digits, permute rows within bands,
// bands, columns within stacks, and stacks. All transforms preserve validity.
inline sudoku::Grid random_solution(mfea::Rng& rng) {
    sudoku::Grid base = canonical_solution();

    std::array<int, 9> relabel{};
    for (int i = 0; i < 9; ++i) relabel[i] = i + 1;
    std::shuffle(relabel.begin(), relabel.end(), rng);

    auto shuffled_triple_order = [&](void) {
        std::array<int, 3> order = {0, 1, 2};
        std::shuffle(order.begin(), order.end(), rng);
        return order;
    };
    std::array<int, 9> row_order{};
    std::array<int, 9> col_order{};
    const auto band_order = shuffled_triple_order();
    const auto stack_order = shuffled_triple_order();
    for (int g = 0; g < 3; ++g) {
        const auto rows_in_band = shuffled_triple_order();
        const auto cols_in_stack = shuffled_triple_order();
        for (int i = 0; i < 3; ++i) {
            row_order[3 * g + i] = 3 * band_order[g] + rows_in_band[i];
            col_order[3 * g + i] = 3 * stack_order[g] + cols_in_stack[i];
        }
    }

    sudoku::Grid out;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            out.cells[r][c] = relabel[base.cells[row_order[r]][col_order[c]] - 1];
    return out;
}

// Random well-posed puzzle: mask a random solution. Givens drawn from a valid
// grid can never conflict.
inline sudoku::Puzzle random_puzzle(mfea::Rng& rng, double keep_probability = 0.3) {
    const sudoku::Grid solution = random_solution(rng);
    sudoku::Puzzle p;
    p.id = "random";
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            if (unit(rng) < keep_probability) {
                p.givens[r][c] = solution.cells[r][c];
                ++p.fixed_count;
            }
        }
    }
    return p;
}

// Random grid whose rows are permutations (no other constraint).
inline sudoku::Grid random_row_permutation_grid(mfea::Rng& rng) {
    sudoku::Grid g;
    for (int r = 0; r < 9; ++r) {
        std::array<int, 9> row{};
        for (int i = 0; i < 9; ++i) row[i] = i + 1;
        std::shuffle(row.begin(), row.end(), rng);
        g.cells[r] = row;
    }
    return g;
}

inline bool rows_are_permutations(const sudoku::Grid& g) {
    for (int r = 0; r < 9; ++r) {
        int mask = 0;
        for (int c = 0; c < 9; ++c) {
            const int v = g.cells[r][c];
            if (v < 1 || v > 9) return false;
            mask |= 1 << v;
        }
        if (mask != 0b1111111110) return false;
    }
    return true;
}

inline bool satisfies_givens(const sudoku::Grid& g, const sudoku::Puzzle& p) {
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (p.givens[r][c] != 0 && g.cells[r][c] != p.givens[r][c]) return false;
    return true;
}

inline std::string serialize_trace(const mfea::RunTrace& trace) {
    std::string out;
    char buf[64];
    for (const auto& row : trace.rows) {
        out += std::to_string(row.generation) + "," + std::to_string(row.evaluations);
        for (double c : row.best_cost) {
            std::snprintf(buf, sizeof(buf), ",%.12g", c);
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.12g;", row.entropy);
        out += buf;
    }
    for (bool s : trace.solved) out += s ? "S" : "u";
    return out;
}

}  // namespace testutil
