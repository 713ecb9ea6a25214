#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

// Multifactorial evolutionary engine. Domain-agnostic: the genotype type G is
// opaque here and every task-specific operation goes through TaskHooks. A
// single-task run (num_tasks == 1) is the plain elitist GA baseline, same code
// path throughout.

namespace mfea {

using Rng = std::mt19937_64;

struct EngineConfig {
    int population_size = 500;
    double mutation_probability = 0.8;
    double random_mating_probability = 1.0;  // 1.0 = unconditional crossover
    std::int64_t max_evaluations = 100000;
    std::uint64_t rng_seed = 42;
};

// N must be even: N/2 random pairs produce exactly N children per generation.
inline void validate_config(const EngineConfig& cfg, int num_tasks) {
    if (num_tasks < 1) throw std::invalid_argument("task set is empty");
    if (cfg.population_size < 2) throw std::invalid_argument("population_size must be at least 2");
    if (cfg.population_size < num_tasks)
        throw std::invalid_argument("population_size must be at least the number of tasks");
    if (cfg.population_size % 2 != 0) throw std::invalid_argument("population_size must be even");
    if (!(cfg.mutation_probability >= 0.0 && cfg.mutation_probability <= 1.0))
        throw std::invalid_argument("mutation_probability must lie in [0, 1]");
    if (!(cfg.random_mating_probability >= 0.0 && cfg.random_mating_probability <= 1.0))
        throw std::invalid_argument("random_mating_probability must lie in [0, 1]");
    if (cfg.max_evaluations < 1) throw std::invalid_argument("max_evaluations must be positive");
}

template <typename G>
struct Individual {
    G genotype{};
    int skill_factor = 0;
    // Cost on the skill-factor task; +inf until evaluated. Cost on every other
    // task is implicitly +inf as well, which is what makes factorial ranks
    // subgroup-local.
    double factorial_cost = std::numeric_limits<double>::infinity();
    double scalar_fitness = 0.0;

    bool evaluated() const { return std::isfinite(factorial_cost); }
};

template <typename G>
struct Population {
    std::vector<Individual<G>> members;
    int num_tasks = 0;
    std::int64_t evaluation_counter = 0;
};

// The seam between the engine and a task domain. evaluate must be
// deterministic; repair must be idempotent.
template <typename G>
struct TaskHooks {
    std::function<double(const G&, int)> evaluate;
    std::function<G(int, Rng&)> random_genotype;
    std::function<std::pair<G, G>(const G&, const G&, Rng&)> crossover;
    std::function<G(const G&, int)> repair;
    std::function<G(const G&, int, Rng&)> mutate;
    std::function<bool(double)> is_solved;
};

template <typename G>
void check_hooks(const TaskHooks<G>& hooks) {
    if (!hooks.evaluate || !hooks.random_genotype || !hooks.crossover || !hooks.repair ||
        !hooks.mutate || !hooks.is_solved)
        throw std::invalid_argument("task hooks are incomplete");
}

// 1-based factorial ranks on task_index. Members whose skill factor matches
// are ranked by ascending cost, stable in member order; all other members
// carry an implicit +inf cost and rank after them, again in member order.
template <typename G>
std::vector<int> factorial_ranks(const Population<G>& pop, int task_index) {
    if (pop.members.empty()) throw std::invalid_argument("population is empty");
    if (task_index < 0 || task_index >= pop.num_tasks)
        throw std::invalid_argument("task index out of range");
    std::vector<std::size_t> on_task;
    std::vector<std::size_t> off_task;
    for (std::size_t i = 0; i < pop.members.size(); ++i)
        (pop.members[i].skill_factor == task_index ? on_task : off_task).push_back(i);
    std::stable_sort(on_task.begin(), on_task.end(), [&](std::size_t a, std::size_t b) {
        return pop.members[a].factorial_cost < pop.members[b].factorial_cost;
    });
    std::vector<int> ranks(pop.members.size(), 0);
    int next = 1;
    for (std::size_t i : on_task) ranks[i] = next++;
    for (std::size_t i : off_task) ranks[i] = next++;
    return ranks;
}

// scalar_fitness = 1 / (factorial rank on the member's own skill-factor
// task). Exactly one member per represented task ends up with fitness 1.
template <typename G>
void update_scalar_fitness(Population<G>& pop) {
    for (const auto& m : pop.members)
        if (!m.evaluated()) throw std::invalid_argument("unevaluated member in population");
    std::vector<std::vector<std::size_t>> groups(pop.num_tasks);
    for (std::size_t i = 0; i < pop.members.size(); ++i)
        groups[pop.members[i].skill_factor].push_back(i);
    for (auto& group : groups) {
        std::stable_sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
            return pop.members[a].factorial_cost < pop.members[b].factorial_cost;
        });
        for (std::size_t pos = 0; pos < group.size(); ++pos)
            pop.members[group[pos]].scalar_fitness = 1.0 / static_cast<double>(pos + 1);
    }
}

// Vertical cultural transmission: one fair draw picks which parent's skill
// factor the child inherits.
template <typename G>
int imitate_skill_factor(const Individual<G>& parent_a, const Individual<G>& parent_b, Rng& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? parent_a.skill_factor
                                                              : parent_b.skill_factor;
}

struct GenerationStats {
    std::vector<double> pooled_best_cost;  // per task, min over parents + children
    std::vector<int> subpopulation_size;   // per task, after survivor selection
    std::int64_t evaluations = 0;          // children evaluated this generation
};

template <typename G>
GenerationStats evolve_generation(Population<G>& pop, const TaskHooks<G>& hooks,
                                  const EngineConfig& cfg, Rng& rng) {
    validate_config(cfg, pop.num_tasks);
    check_hooks(hooks);
    const std::size_t n = pop.members.size();
    if (n != static_cast<std::size_t>(cfg.population_size))
        throw std::invalid_argument("population size does not match configuration");
    for (const auto& m : pop.members)
        if (!m.evaluated()) throw std::invalid_argument("unevaluated member in population");

    // Uniformly random perfect matching of the parents.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Individual<G>> children;
    children.reserve(n);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        const auto& pa = pop.members[order[k]];
        const auto& pb = pop.members[order[k + 1]];
        const bool mate =
            pa.skill_factor == pb.skill_factor || unit(rng) < cfg.random_mating_probability;
        std::pair<G, G> offspring = mate ? hooks.crossover(pa.genotype, pb.genotype, rng)
                                         : std::pair<G, G>{pa.genotype, pb.genotype};
        for (G* genotype : {&offspring.first, &offspring.second}) {
            Individual<G> child;
            // Skill factor is assigned before repair and mutation so both
            // operators know which task's constraints apply.
            child.skill_factor = imitate_skill_factor(pa, pb, rng);
            child.genotype = hooks.repair(*genotype, child.skill_factor);
            if (unit(rng) < cfg.mutation_probability)
                child.genotype = hooks.mutate(child.genotype, child.skill_factor, rng);
            child.factorial_cost = hooks.evaluate(child.genotype, child.skill_factor);
            children.push_back(std::move(child));
        }
    }

    // Pooled population: children first, then parents.
    Population<G> pooled;
    pooled.num_tasks = pop.num_tasks;
    pooled.members = std::move(children);
    pooled.members.reserve(pooled.members.size() + n);
    for (auto& m : pop.members) pooled.members.push_back(std::move(m));
    update_scalar_fitness(pooled);

    GenerationStats stats;
    stats.evaluations = static_cast<std::int64_t>(n);
    stats.pooled_best_cost.assign(pop.num_tasks, std::numeric_limits<double>::infinity());
    for (const auto& m : pooled.members)
        stats.pooled_best_cost[m.skill_factor] =
            std::min(stats.pooled_best_cost[m.skill_factor], m.factorial_cost);

    // Elitist survivor selection. The seeded shuffle breaks scalar-fitness
    // ties without bias toward either task; the stable sort keeps the
    // shuffled order within each tie class.
    std::vector<std::size_t> sel(pooled.members.size());
    std::iota(sel.begin(), sel.end(), std::size_t{0});
    std::shuffle(sel.begin(), sel.end(), rng);
    std::stable_sort(sel.begin(), sel.end(), [&](std::size_t a, std::size_t b) {
        return pooled.members[a].scalar_fitness > pooled.members[b].scalar_fitness;
    });

    std::vector<Individual<G>> survivors;
    survivors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) survivors.push_back(std::move(pooled.members[sel[i]]));
    pop.members = std::move(survivors);
    pop.evaluation_counter += static_cast<std::int64_t>(n);
    update_scalar_fitness(pop);

    stats.subpopulation_size.assign(pop.num_tasks, 0);
    for (const auto& m : pop.members) ++stats.subpopulation_size[m.skill_factor];
    return stats;
}

template <typename G>
Population<G> initialize_population(int num_tasks, const TaskHooks<G>& hooks,
                                    const EngineConfig& cfg, Rng& rng) {
    validate_config(cfg, num_tasks);
    check_hooks(hooks);
    Population<G> pop;
    pop.num_tasks = num_tasks;
    pop.members.reserve(static_cast<std::size_t>(cfg.population_size));
    std::uniform_int_distribution<int> pick_task(0, num_tasks - 1);
    for (int i = 0; i < cfg.population_size; ++i) {
        Individual<G> ind;
        ind.skill_factor = pick_task(rng);
        ind.genotype = hooks.random_genotype(ind.skill_factor, rng);
        ind.factorial_cost = hooks.evaluate(ind.genotype, ind.skill_factor);
        pop.members.push_back(std::move(ind));
    }
    pop.evaluation_counter = cfg.population_size;
    update_scalar_fitness(pop);
    return pop;
}

struct TraceRow {
    int generation = 0;
    std::int64_t evaluations = 0;         // cumulative
    std::vector<double> best_cost;        // per task, best found so far
    double entropy = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<bool> solved;  // per task, at termination
};

// Optional per-generation metric over a genotype snapshot (diversity etc.).
template <typename G>
using PopulationMetric = std::function<double(const std::vector<G>&)>;

// Full run: initialize, then evolve until the evaluation budget is exhausted
// or every task is solved. Deterministic given (num_tasks, config, seed).
template <typename G>
RunTrace run(int num_tasks, const TaskHooks<G>& hooks, const EngineConfig& cfg,
             const PopulationMetric<G>& entropy_metric = {},
             const std::function<void(const TraceRow&)>& on_generation = {}) {
    validate_config(cfg, num_tasks);
    check_hooks(hooks);
    Rng rng(cfg.rng_seed);
    Population<G> pop = initialize_population(num_tasks, hooks, cfg, rng);

    std::vector<double> best(num_tasks, std::numeric_limits<double>::infinity());
    auto measure_entropy = [&]() {
        if (!entropy_metric) return 0.0;
        std::vector<G> genotypes;
        genotypes.reserve(pop.members.size());
        for (const auto& m : pop.members) genotypes.push_back(m.genotype);
        return entropy_metric(genotypes);
    };

    RunTrace trace;
    auto record = [&](int generation) {
        for (const auto& m : pop.members)
            best[m.skill_factor] = std::min(best[m.skill_factor], m.factorial_cost);
        TraceRow row{generation, pop.evaluation_counter, best, measure_entropy()};
        if (on_generation) on_generation(row);
        trace.rows.push_back(std::move(row));
    };
    auto all_solved = [&]() {
        for (int t = 0; t < num_tasks; ++t)
            if (!hooks.is_solved(best[t])) return false;
        return true;
    };

    record(0);
    int generation = 0;
    while (!all_solved() && pop.evaluation_counter < cfg.max_evaluations) {
        evolve_generation(pop, hooks, cfg, rng);
        record(++generation);
    }

    trace.solved.resize(num_tasks);
    for (int t = 0; t < num_tasks; ++t) trace.solved[t] = hooks.is_solved(best[t]);
    return trace;
}

}  // namespace mfea
