#include "mfea/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "mfea/diversity.hpp"
#include "mfea/svg.hpp"

#ifndef MFEA_BUNDLED_PUZZLE_DIR
#define MFEA_BUNDLED_PUZZLE_DIR "puzzles"
#endif

namespace harness {

const char* group_name(Group group) { return group == Group::A ? "A" : "B"; }

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::ST: return "st";
        case Mode::MT_CLONE: return "clone";
        case Mode::MT_SYNERGY: return "synergy";
        case Mode::MT_UNRELATED: return "unrelated";
    }
    return "unknown";
}

std::string mode_label(Mode mode) {
    switch (mode) {
        case Mode::ST: return "ST";
        case Mode::MT_CLONE: return "MT(clone)";
        case Mode::MT_SYNERGY: return "MT(synergy)";
        case Mode::MT_UNRELATED: return "MT(unrelated)";
    }
    return "unknown";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    if (name == "st") return Mode::ST;
    if (name == "clone") return Mode::MT_CLONE;
    if (name == "synergy") return Mode::MT_SYNERGY;
    if (name == "unrelated") return Mode::MT_UNRELATED;
    return std::nullopt;
}

std::string setup_name(const ExperimentSetup& setup) {
    return std::string(group_name(setup.group)) + "_" + mode_name(setup.mode);
}

std::string default_puzzle_dir() {
    if (const char* env = std::getenv("MFEA_PUZZLE_DIR")) return env;
    if (std::filesystem::is_directory("puzzles")) return "puzzles";
    return MFEA_BUNDLED_PUZZLE_DIR;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    return hash;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

sudoku::Puzzle load_validated(const std::string& puzzle_dir, const std::string& id) {
    const std::string path = puzzle_dir + "/" + id + ".sdk";
    sudoku::Puzzle puzzle = sudoku::load_puzzle_file(path);
    if (!sudoku::exact_solve(puzzle))
        throw std::runtime_error("invalid asset: puzzle " + id + " is unsatisfiable");
    return puzzle;
}

}  // namespace

ExperimentSetup build_setup(Group group, Mode mode, const std::string& puzzle_dir,
                            const ConfigOverrides& overrides) {
    ExperimentSetup setup;
    setup.group = group;
    setup.mode = mode;
    setup.puzzle_dir = puzzle_dir;

    const std::string g = group_name(group);
    auto add = [&](int index) {
        sudoku::Puzzle p = load_validated(puzzle_dir, g + std::to_string(index));
        setup.task_ids.push_back(p.id);
        setup.tasks.push_back(std::move(p));
    };
    switch (mode) {
        case Mode::ST: add(1); break;
        case Mode::MT_CLONE: add(1); add(1); break;
        case Mode::MT_SYNERGY: add(1); add(2); break;
        case Mode::MT_UNRELATED: add(1); add(3); break;
    }

    setup.engine.population_size = overrides.population_size.value_or(500);
    setup.engine.mutation_probability = overrides.mutation_probability.value_or(0.8);
    setup.engine.random_mating_probability = overrides.random_mating_probability.value_or(1.0);
    setup.engine.max_evaluations = overrides.max_evaluations.value_or(100000);
    setup.mutation_scheme =
        overrides.mutation_scheme.value_or(sudoku::MutationScheme::per_offspring);
    setup.repetitions = overrides.repetitions.value_or(20);
    setup.base_seed = overrides.base_seed.value_or(42);
    if (setup.repetitions < 1) throw std::invalid_argument("repetitions must be positive");
    mfea::validate_config(setup.engine, static_cast<int>(setup.tasks.size()));
    return setup;
}

// The engine applies its own per-offspring gate; the per-row scheme moves the
// probability inside the operator and opens the gate.
mfea::EngineConfig effective_engine_config(const ExperimentSetup& setup) {
    mfea::EngineConfig cfg = setup.engine;
    if (setup.mutation_scheme == sudoku::MutationScheme::per_row) cfg.mutation_probability = 1.0;
    return cfg;
}

double fitness_from_cost(double cost) {
    if (!std::isfinite(cost)) return 0.0;  // task never represented
    return static_cast<double>(sudoku::kMaxRawFitness) - cost;
}

AggregatedCurves run_experiment(const ExperimentSetup& setup, bool parallel) {
    const int num_tasks = static_cast<int>(setup.tasks.size());
    const mfea::TaskHooks<sudoku::Grid> hooks = sudoku::make_task_hooks(
        setup.tasks, setup.mutation_scheme, setup.engine.mutation_probability);
    const mfea::PopulationMetric<sudoku::Grid> entropy = [](const std::vector<sudoku::Grid>& gs) {
        return diversity::population_entropy(gs).total_entropy;
    };

    AggregatedCurves result;
    result.setup = setup;
    result.runs.resize(static_cast<std::size_t>(setup.repetitions));

    auto execute = [&](int index) {
        mfea::EngineConfig cfg = effective_engine_config(setup);
        cfg.rng_seed = setup.base_seed + static_cast<std::uint64_t>(index);
        RunRecord rec;
        rec.seed = cfg.rng_seed;
        try {
            rec.trace = mfea::run<sudoku::Grid>(num_tasks, hooks, cfg, entropy);
        } catch (const std::exception& e) {
            throw std::runtime_error("run with seed " + std::to_string(cfg.rng_seed) +
                                     " failed: " + e.what());
        }
        rec.native_rows = static_cast<int>(rec.trace.rows.size());
        rec.solved_all = true;
        for (bool s : rec.trace.solved) rec.solved_all = rec.solved_all && s;
        rec.focal_solved = false;
        rec.evals_to_focal_solve = setup.engine.max_evaluations;
        for (const auto& row : rec.trace.rows) {
            if (row.best_cost[0] == 0.0) {
                rec.focal_solved = true;
                rec.evals_to_focal_solve = row.evaluations;
                break;
            }
        }
        result.runs[static_cast<std::size_t>(index)] = std::move(rec);
    };

    if (parallel && setup.repetitions > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<std::size_t>(setup.repetitions));
        for (int i = 0; i < setup.repetitions; ++i)
            futures.push_back(std::async(std::launch::async, execute, i));
        for (auto& f : futures) f.get();  // deterministic join by run index
    } else {
        for (int i = 0; i < setup.repetitions; ++i) execute(i);
    }

    // Pad early-solved runs by holding their final values. Padded rows keep
    // the aligned evaluation count N * (generation + 1).
    int max_rows = 0;
    for (const auto& rec : result.runs) max_rows = std::max(max_rows, rec.native_rows);
    const std::int64_t n = setup.engine.population_size;
    for (auto& rec : result.runs) {
        while (static_cast<int>(rec.trace.rows.size()) < max_rows) {
            mfea::TraceRow row = rec.trace.rows.back();
            row.generation += 1;
            row.evaluations = n * (static_cast<std::int64_t>(row.generation) + 1);
            rec.trace.rows.push_back(std::move(row));
        }
    }

    result.mean.resize(static_cast<std::size_t>(max_rows));
    for (int g = 0; g < max_rows; ++g) {
        MeanRow& row = result.mean[static_cast<std::size_t>(g)];
        row.generation = g;
        row.evaluations = n * (static_cast<std::int64_t>(g) + 1);
        row.mean_best_fitness.assign(static_cast<std::size_t>(num_tasks), 0.0);
        double entropy_sum = 0.0;
        for (const auto& rec : result.runs) {
            const auto& tr = rec.trace.rows[static_cast<std::size_t>(g)];
            for (int t = 0; t < num_tasks; ++t)
                row.mean_best_fitness[static_cast<std::size_t>(t)] +=
                    fitness_from_cost(tr.best_cost[static_cast<std::size_t>(t)]);
            entropy_sum += tr.entropy;
        }
        const double reps = static_cast<double>(setup.repetitions);
        for (double& f : row.mean_best_fitness) f /= reps;
        row.mean_entropy = entropy_sum / reps;
    }
    return result;
}

namespace {

std::string mean_csv_path(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() >= suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + "_mean.csv";
    return csv_path + "_mean.csv";
}

std::string format_fixed6(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string format_integer_fitness(double value) {
    return std::to_string(static_cast<long long>(value));
}

}  // namespace

void emit_csv(const AggregatedCurves& curves, const std::string& csv_path) {
    const std::string name = setup_name(curves.setup);
    const std::string mode = mode_name(curves.setup.mode);
    const int num_tasks = static_cast<int>(curves.setup.tasks.size());

    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write csv file: " + csv_path);
    out << "setup,mode,run,generation,evaluations,best_fitness_task1,best_fitness_task2,"
           "entropy,padded\n";
    for (std::size_t i = 0; i < curves.runs.size(); ++i) {
        const RunRecord& rec = curves.runs[i];
        for (std::size_t g = 0; g < rec.trace.rows.size(); ++g) {
            const mfea::TraceRow& row = rec.trace.rows[g];
            out << name << ',' << mode << ',' << i << ',' << row.generation << ','
                << row.evaluations << ',' << format_integer_fitness(fitness_from_cost(row.best_cost[0]))
                << ',';
            if (num_tasks > 1) out << format_integer_fitness(fitness_from_cost(row.best_cost[1]));
            out << ',' << format_fixed6(row.entropy) << ','
                << (static_cast<int>(g) >= rec.native_rows ? 1 : 0) << '\n';
        }
    }
    out.close();

    std::ofstream mean_out(mean_csv_path(csv_path), std::ios::binary);
    if (!mean_out) throw std::runtime_error("cannot write csv file: " + mean_csv_path(csv_path));
    mean_out << "setup,mode,generation,evaluations,mean_best_fitness_task1,"
                "mean_best_fitness_task2,mean_entropy\n";
    for (const MeanRow& row : curves.mean) {
        mean_out << name << ',' << mode << ',' << row.generation << ',' << row.evaluations << ','
                 << format_fixed6(row.mean_best_fitness[0]) << ',';
        if (num_tasks > 1) mean_out << format_fixed6(row.mean_best_fitness[1]);
        mean_out << ',' << format_fixed6(row.mean_entropy) << '\n';
    }
}

void emit_plot(const std::vector<const AggregatedCurves*>& curves, PlotKind kind,
               const std::string& path) {
    if (curves.empty()) throw std::invalid_argument("no curves to plot");
    svg::LineChart chart;
    const std::string group = group_name(curves.front()->setup.group);
    if (kind == PlotKind::convergence) {
        chart.title = "Group " + group + " convergence (focal task " +
                      curves.front()->setup.task_ids[0] + ")";
        chart.x_label = "evaluations";
        chart.y_label = "best fitness";
        chart.y_min = 0.0;
        chart.y_max = static_cast<double>(sudoku::kMaxRawFitness);
        double x_max = 1.0;
        for (const auto* c : curves)
            if (!c->mean.empty()) x_max = std::max(x_max, static_cast<double>(c->mean.back().evaluations));
        chart.x_min = 0.0;
        chart.x_max = x_max;
        for (const auto* c : curves) {
            svg::Series series;
            series.label = mode_label(c->setup.mode);
            for (const MeanRow& row : c->mean)
                series.points.emplace_back(static_cast<double>(row.evaluations),
                                           row.mean_best_fitness[0]);
            chart.series.push_back(std::move(series));
        }
    } else {
        chart.title = "Group " + group + " population diversity";
        chart.x_label = "generation";
        chart.y_label = "population entropy";
        chart.y_min = 0.0;
        chart.y_max = 1.0;
        double x_max = 1.0;
        for (const auto* c : curves)
            if (!c->mean.empty()) x_max = std::max(x_max, static_cast<double>(c->mean.back().generation));
        chart.x_min = 0.0;
        chart.x_max = x_max;
        for (const auto* c : curves) {
            svg::Series series;
            series.label = mode_label(c->setup.mode);
            for (const MeanRow& row : c->mean)
                series.points.emplace_back(static_cast<double>(row.generation), row.mean_entropy);
            chart.series.push_back(std::move(series));
        }
    }
    chart.render_to_file(path);
}

void write_manifest(const AggregatedCurves& curves, const std::string& path) {
    const ExperimentSetup& setup = curves.setup;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest file: " + path);
    char buf[64];
    out << "setup=" << setup_name(setup) << '\n';
    out << "group=" << group_name(setup.group) << '\n';
    out << "mode=" << mode_name(setup.mode) << '\n';
    out << "tasks=";
    for (std::size_t i = 0; i < setup.task_ids.size(); ++i)
        out << (i ? "," : "") << setup.task_ids[i];
    out << '\n';
    out << "population_size=" << setup.engine.population_size << '\n';
    std::snprintf(buf, sizeof(buf), "%g", setup.engine.mutation_probability);
    out << "mutation_probability=" << buf << '\n';
    out << "mutation_scheme="
        << (setup.mutation_scheme == sudoku::MutationScheme::per_row ? "per_row" : "per_offspring")
        << '\n';
    std::snprintf(buf, sizeof(buf), "%g", setup.engine.random_mating_probability);
    out << "random_mating_probability=" << buf << '\n';
    out << "max_evaluations=" << setup.engine.max_evaluations << '\n';
    out << "repetitions=" << setup.repetitions << '\n';
    out << "base_seed=" << setup.base_seed << '\n';
    out << "convergence_metric=best_of_population\n";

    std::vector<std::string> seen;
    for (const std::string& id : setup.task_ids) {
        if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
        seen.push_back(id);
        const std::string bytes = read_file(setup.puzzle_dir + "/" + id + ".sdk");
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes)));
        out << "asset_" << id << "=" << buf << '\n';
    }

    int solved_runs = 0;
    for (const RunRecord& rec : curves.runs) solved_runs += rec.focal_solved ? 1 : 0;
    out << "focal_solved_runs=" << solved_runs << '\n';
    for (std::size_t i = 0; i < curves.runs.size(); ++i) {
        const RunRecord& rec = curves.runs[i];
        out << "run_" << i << "_seed=" << rec.seed << '\n';
        out << "run_" << i << "_focal_solved=" << (rec.focal_solved ? 1 : 0) << '\n';
        out << "run_" << i << "_evals_to_focal_solve=" << rec.evals_to_focal_solve << '\n';
    }
}

}  // namespace harness
