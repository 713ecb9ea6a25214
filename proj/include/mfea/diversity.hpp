#pragma once

#include <array>
#include <vector>

#include "mfea/sudoku.hpp"

// Entropy-based population diversity. Per-locus entropy uses base-9
// logarithms so both the locus value and the population total lie in [0, 1];
// zero-count digits contribute nothing (0 * log 0 = 0), no smoothing.

namespace diversity {

struct LocusDistribution {
    std::array<int, 9> counts{};  // occurrences of digits 1..9 at one locus
    int population_size = 0;
};

enum class Scope { whole_population, skill_group };

struct EntropyReport {
    std::array<std::array<double, 9>, 9> locus_entropy{};
    double total_entropy = 0.0;  // mean of the 81 locus entropies
    int generation = 0;
    Scope scope = Scope::whole_population;
};

LocusDistribution locus_distribution(const std::vector<sudoku::Grid>& genotypes, int r, int c);
double locus_entropy(const std::vector<sudoku::Grid>& genotypes, int r, int c);
EntropyReport population_entropy(const std::vector<sudoku::Grid>& genotypes);

// Diagnostic: entropy of one skill-factor subgroup.
EntropyReport subgroup_entropy(const std::vector<sudoku::Grid>& genotypes,
                               const std::vector<int>& skill_factors, int task);

}  // namespace diversity
