#include "mfea/sudoku.hpp"

#include <bit>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace sudoku {

namespace {

constexpr int kRowMask = 0b1111111110;  // bits 1..9 set

int subgrid_index(int r, int c) { return (r / 3) * 3 + c / 3; }

void check_rows_are_permutations(const Grid& grid) {
    for (int r = 0; r < 9; ++r) {
        int mask = 0;
        for (int c = 0; c < 9; ++c) {
            const int v = grid.cells[r][c];
            if (v >= 1 && v <= 9) mask |= 1 << v;
        }
        if (mask != kRowMask)
            throw std::invalid_argument("row " + std::to_string(r + 1) +
                                        " is not a permutation of 1..9");
    }
}

}  // namespace

Puzzle parse_puzzle(const std::string& text, const std::string& id) {
    std::vector<std::string> lines;
    std::string current;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (!current.empty()) lines.push_back(current);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    std::string flat;
    if (lines.size() == 1 && lines[0].size() == 81) {
        flat = lines[0];
    } else if (lines.size() == 9) {
        for (std::size_t i = 0; i < 9; ++i) {
            if (lines[i].size() != 9)
                throw std::runtime_error("puzzle " + id + ": line " + std::to_string(i + 1) +
                                         " has " + std::to_string(lines[i].size()) +
                                         " characters, expected 9");
            flat += lines[i];
        }
    } else {
        throw std::runtime_error("puzzle " + id +
                                 ": expected 9 lines of 9 characters or one 81-character line");
    }

    Puzzle puzzle;
    puzzle.id = id;
    for (int i = 0; i < 81; ++i) {
        const char ch = flat[static_cast<std::size_t>(i)];
        if (ch == '.') continue;
        if (ch < '1' || ch > '9')
            throw std::runtime_error("puzzle " + id + ": illegal character '" + std::string(1, ch) +
                                     "' at row " + std::to_string(i / 9 + 1) + ", column " +
                                     std::to_string(i % 9 + 1));
        puzzle.givens[i / 9][i % 9] = ch - '0';
        ++puzzle.fixed_count;
    }

    // Ill-posed statements are rejected here so every downstream operator can
    // assume consistent givens.
    int row_mask[9] = {};
    int col_mask[9] = {};
    int box_mask[9] = {};
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            const int v = puzzle.givens[r][c];
            if (v == 0) continue;
            const int m = 1 << v;
            const int b = subgrid_index(r, c);
            if (row_mask[r] & m)
                throw std::runtime_error("puzzle " + id + ": duplicate given " +
                                         std::to_string(v) + " in row " + std::to_string(r + 1));
            if (col_mask[c] & m)
                throw std::runtime_error("puzzle " + id + ": duplicate given " +
                                         std::to_string(v) + " in column " + std::to_string(c + 1));
            if (box_mask[b] & m)
                throw std::runtime_error("puzzle " + id + ": duplicate given " +
                                         std::to_string(v) + " in subgrid " + std::to_string(b + 1));
            row_mask[r] |= m;
            col_mask[c] |= m;
            box_mask[b] |= m;
        }
    }
    return puzzle;
}

Puzzle load_puzzle_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open puzzle file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_puzzle(buffer.str(), std::filesystem::path(path).stem().string());
}

std::string to_text(const Grid& grid) {
    std::string out;
    out.reserve(90);
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) out.push_back(static_cast<char>('0' + grid.cells[r][c]));
        out.push_back('\n');
    }
    return out;
}

std::string givens_text(const Puzzle& puzzle) {
    std::string out;
    out.reserve(90);
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            const int v = puzzle.givens[r][c];
            out.push_back(v == 0 ? '.' : static_cast<char>('0' + v));
        }
        out.push_back('\n');
    }
    return out;
}

int raw_fitness(const Grid& grid) {
    check_rows_are_permutations(grid);
    int score = 0;
    for (int c = 0; c < 9; ++c) {
        unsigned mask = 0;
        for (int r = 0; r < 9; ++r) mask |= 1u << grid.cells[r][c];
        score += std::popcount(mask);
    }
    for (int b = 0; b < 9; ++b) {
        const int r0 = (b / 3) * 3;
        const int c0 = (b % 3) * 3;
        unsigned mask = 0;
        for (int i = 0; i < 9; ++i) mask |= 1u << grid.cells[r0 + i / 3][c0 + i % 3];
        score += std::popcount(mask);
    }
    return score;
}

int evaluate(const Grid& grid, const Puzzle& puzzle) {
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (puzzle.givens[r][c] != 0 && grid.cells[r][c] != puzzle.givens[r][c])
                throw std::invalid_argument("grid violates given at row " + std::to_string(r + 1) +
                                            ", column " + std::to_string(c + 1) + " of puzzle " +
                                            puzzle.id);
    return kMaxRawFitness - raw_fitness(grid);
}

Grid random_individual(const Puzzle& puzzle, mfea::Rng& rng) {
    Grid grid;
    for (int r = 0; r < 9; ++r) {
        bool used[10] = {};
        for (int c = 0; c < 9; ++c) {
            const int v = puzzle.givens[r][c];
            if (v != 0) {
                grid.cells[r][c] = v;
                used[v] = true;
            }
        }
        std::array<int, 9> free_digits{};
        int n = 0;
        for (int d = 1; d <= 9; ++d)
            if (!used[d]) free_digits[n++] = d;
        std::shuffle(free_digits.begin(), free_digits.begin() + n, rng);
        int k = 0;
        for (int c = 0; c < 9; ++c)
            if (!puzzle.is_fixed(r, c)) grid.cells[r][c] = free_digits[k++];
    }
    return grid;
}

Row pmx_row(const Row& parent_a, const Row& parent_b, int cut_a, int cut_b) {
    if (!(0 <= cut_a && cut_a < cut_b && cut_b <= 9))
        throw std::invalid_argument("pmx cuts must satisfy 0 <= cut_a < cut_b <= 9");
    auto is_permutation = [](const Row& row) {
        int mask = 0;
        for (int v : row) {
            if (v < 1 || v > 9) return false;
            mask |= 1 << v;
        }
        return mask == kRowMask;
    };
    if (!is_permutation(parent_a) || !is_permutation(parent_b))
        throw std::invalid_argument("pmx parents must be permutations of 1..9");

    Row child{};
    std::array<int, 10> segment_pos{};  // digit -> 1-based position in the copied segment
    for (int i = cut_a; i < cut_b; ++i) {
        child[i] = parent_a[i];
        segment_pos[parent_a[i]] = i + 1;
    }
    for (int i = 0; i < 9; ++i) {
        if (i >= cut_a && i < cut_b) continue;
        int v = parent_b[i];
        // Resolve conflicts through the segment mapping parent_a[j] -> parent_b[j].
        while (segment_pos[v] != 0) v = parent_b[segment_pos[v] - 1];
        child[i] = v;
    }
    return child;
}

std::pair<Grid, Grid> pmx_grid(const Grid& parent_a, const Grid& parent_b, mfea::Rng& rng) {
    Grid child_a;
    Grid child_b;
    std::uniform_int_distribution<int> pick_first(0, 9);
    std::uniform_int_distribution<int> pick_second(0, 8);
    for (int r = 0; r < 9; ++r) {
        int a = pick_first(rng);
        int b = pick_second(rng);
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        child_a.cells[r] = pmx_row(parent_a.cells[r], parent_b.cells[r], a, b);
        child_b.cells[r] = pmx_row(parent_b.cells[r], parent_a.cells[r], a, b);
    }
    return {child_a, child_b};
}

Grid repair(const Grid& grid, const Puzzle& puzzle) {
    check_rows_are_permutations(grid);
    Grid out = grid;
    for (int r = 0; r < 9; ++r) {
        bool is_given_digit[10] = {};
        bool row_has_givens = false;
        for (int c = 0; c < 9; ++c) {
            const int v = puzzle.givens[r][c];
            if (v != 0) {
                is_given_digit[v] = true;
                row_has_givens = true;
            }
        }
        if (!row_has_givens) continue;
        std::array<int, 9> remainder{};
        int n = 0;
        for (int c = 0; c < 9; ++c) {
            const int v = grid.cells[r][c];
            if (!is_given_digit[v]) remainder[n++] = v;
        }
        int k = 0;
        for (int c = 0; c < 9; ++c)
            out.cells[r][c] = puzzle.is_fixed(r, c) ? puzzle.givens[r][c] : remainder[k++];
    }
    return out;
}

namespace {

void swap_two_free_cells(Grid& grid, const Puzzle& puzzle, int r, mfea::Rng& rng) {
    std::array<int, 9> free_cols{};
    int m = 0;
    for (int c = 0; c < 9; ++c)
        if (!puzzle.is_fixed(r, c)) free_cols[m++] = c;
    const int i = std::uniform_int_distribution<int>(0, m - 1)(rng);
    int j = std::uniform_int_distribution<int>(0, m - 2)(rng);
    if (j >= i) ++j;
    std::swap(grid.cells[r][free_cols[i]], grid.cells[r][free_cols[j]]);
}

int count_free_cells(const Puzzle& puzzle, int r) {
    int free_cells = 0;
    for (int c = 0; c < 9; ++c)
        if (!puzzle.is_fixed(r, c)) ++free_cells;
    return free_cells;
}

}  // namespace

Grid mutate(const Grid& grid, const Puzzle& puzzle, mfea::Rng& rng) {
    std::array<int, 9> eligible{};
    int num_eligible = 0;
    for (int r = 0; r < 9; ++r)
        if (count_free_cells(puzzle, r) >= 2) eligible[num_eligible++] = r;
    if (num_eligible == 0) return grid;

    Grid out = grid;
    const int r = eligible[std::uniform_int_distribution<int>(0, num_eligible - 1)(rng)];
    swap_two_free_cells(out, puzzle, r, rng);
    return out;
}

Grid mutate_rows(const Grid& grid, const Puzzle& puzzle, double row_probability, mfea::Rng& rng) {
    Grid out = grid;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < 9; ++r) {
        if (count_free_cells(puzzle, r) < 2) continue;
        if (unit(rng) < row_probability) swap_two_free_cells(out, puzzle, r, rng);
    }
    return out;
}

namespace {

struct SolverState {
    Grid grid{};
    int row_mask[9] = {};
    int col_mask[9] = {};
    int box_mask[9] = {};
    std::vector<std::pair<int, int>> free_cells;  // row-major order
};

bool solve_from(SolverState& s, std::size_t index) {
    if (index == s.free_cells.size()) return true;
    const auto [r, c] = s.free_cells[index];
    const int b = subgrid_index(r, c);
    for (int v = 1; v <= 9; ++v) {
        const int m = 1 << v;
        if ((s.row_mask[r] | s.col_mask[c] | s.box_mask[b]) & m) continue;
        s.row_mask[r] |= m;
        s.col_mask[c] |= m;
        s.box_mask[b] |= m;
        s.grid.cells[r][c] = v;
        if (solve_from(s, index + 1)) return true;
        s.row_mask[r] &= ~m;
        s.col_mask[c] &= ~m;
        s.box_mask[b] &= ~m;
        s.grid.cells[r][c] = 0;
    }
    return false;
}

}  // namespace

std::optional<Grid> exact_solve(const Puzzle& puzzle) {
    SolverState s;
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            const int v = puzzle.givens[r][c];
            if (v == 0) {
                s.free_cells.emplace_back(r, c);
                continue;
            }
            const int m = 1 << v;
            const int b = subgrid_index(r, c);
            if ((s.row_mask[r] | s.col_mask[c] | s.box_mask[b]) & m) return std::nullopt;
            s.row_mask[r] |= m;
            s.col_mask[c] |= m;
            s.box_mask[b] |= m;
            s.grid.cells[r][c] = v;
        }
    }
    if (!solve_from(s, 0)) return std::nullopt;
    return s.grid;
}

int solution_similarity(const Grid& a, const Grid& b) {
    int same = 0;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c)
            if (a.cells[r][c] == b.cells[r][c]) ++same;
    return same;
}

int log9_search_space(int fp_focal, int fp_conditioning) {
    if (fp_focal < 0 || fp_focal > 81 || fp_conditioning < 0 || fp_conditioning > 81)
        throw std::invalid_argument("fixed-cell counts must lie in [0, 81]");
    return std::max(0, 81 - fp_focal - fp_conditioning);
}

mfea::TaskHooks<Grid> make_task_hooks(TaskSet tasks, MutationScheme scheme,
                                      double mutation_probability) {
    if (tasks.empty()) throw std::invalid_argument("task set is empty");
    auto shared = std::make_shared<const TaskSet>(std::move(tasks));
    mfea::TaskHooks<Grid> hooks;
    hooks.evaluate = [shared](const Grid& g, int t) {
        return static_cast<double>(evaluate(g, shared->at(static_cast<std::size_t>(t))));
    };
    hooks.random_genotype = [shared](int t, mfea::Rng& rng) {
        return random_individual(shared->at(static_cast<std::size_t>(t)), rng);
    };
    hooks.crossover = [](const Grid& a, const Grid& b, mfea::Rng& rng) {
        return pmx_grid(a, b, rng);
    };
    hooks.repair = [shared](const Grid& g, int t) {
        return repair(g, shared->at(static_cast<std::size_t>(t)));
    };
    if (scheme == MutationScheme::per_offspring) {
        hooks.mutate = [shared](const Grid& g, int t, mfea::Rng& rng) {
            return mutate(g, shared->at(static_cast<std::size_t>(t)), rng);
        };
    } else {
        hooks.mutate = [shared, mutation_probability](const Grid& g, int t, mfea::Rng& rng) {
            return mutate_rows(g, shared->at(static_cast<std::size_t>(t)), mutation_probability,
                               rng);
        };
    }
    hooks.is_solved = [](double cost) { return cost == 0.0; };
    return hooks;
}

}  // namespace sudoku
