#include "mfea/diversity.hpp"

#include <cmath>
#include <stdexcept>

namespace diversity {

namespace {

const double kLog9 = std::log(9.0);

double entropy_from_counts(const std::array<int, 9>& counts, int population_size) {
    double e = 0.0;
    for (int count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(population_size);
        e -= p * std::log(p) / kLog9;
    }
    return e;
}

}  // namespace

LocusDistribution locus_distribution(const std::vector<sudoku::Grid>& genotypes, int r, int c) {
    if (genotypes.empty()) throw std::invalid_argument("population is empty");
    if (r < 0 || r > 8 || c < 0 || c > 8) throw std::invalid_argument("locus out of range");
    LocusDistribution dist;
    dist.population_size = static_cast<int>(genotypes.size());
    for (const auto& g : genotypes) {
        const int v = g.cells[r][c];
        if (v < 1 || v > 9) throw std::invalid_argument("genotype digit out of range");
        ++dist.counts[v - 1];
    }
    return dist;
}

double locus_entropy(const std::vector<sudoku::Grid>& genotypes, int r, int c) {
    const LocusDistribution dist = locus_distribution(genotypes, r, c);
    return entropy_from_counts(dist.counts, dist.population_size);
}

EntropyReport subgroup_entropy(const std::vector<sudoku::Grid>& genotypes,
                               const std::vector<int>& skill_factors, int task) {
    if (genotypes.size() != skill_factors.size())
        throw std::invalid_argument("genotype and skill-factor lists differ in length");
    std::vector<sudoku::Grid> subgroup;
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        if (skill_factors[i] == task) subgroup.push_back(genotypes[i]);
    EntropyReport report = population_entropy(subgroup);
    report.scope = Scope::skill_group;
    return report;
}

EntropyReport population_entropy(const std::vector<sudoku::Grid>& genotypes) {
    if (genotypes.empty()) throw std::invalid_argument("population is empty");
    std::array<std::array<std::array<int, 9>, 9>, 9> counts{};  // [row][col][digit-1]
    for (const auto& g : genotypes) {
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 9; ++c) {
                const int v = g.cells[r][c];
                if (v < 1 || v > 9) throw std::invalid_argument("genotype digit out of range");
                ++counts[r][c][v - 1];
            }
        }
    }
    EntropyReport report;
    const int n = static_cast<int>(genotypes.size());
    double sum = 0.0;
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            const double e = entropy_from_counts(counts[r][c], n);
            report.locus_entropy[r][c] = e;
            sum += e;
        }
    }
    report.total_entropy = sum / 81.0;
    return report;
}

}  // namespace diversity
