#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfea/diversity.hpp"
#include "mfea/engine.hpp"
#include "mfea/experiment.hpp"
#include "mfea/sudoku.hpp"

// Exit codes: 0 success, 1 runtime failure, 2 usage error.

namespace {

const std::vector<std::string> kBundledIds = {"A1", "A2", "A3", "B1", "B2", "B3"};

struct EngineFlags {
    int pop = 500;
    double mutation = 0.8;
    std::string scheme = "offspring";
    double rmp = 1.0;
    std::int64_t max_evals = 100000;
    std::uint64_t seed = 42;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
    cmd->add_option("--pop", flags.pop, "Population size (even)")->capture_default_str();
    cmd->add_option("--mutation", flags.mutation, "Mutation probability")->capture_default_str();
    cmd->add_option("--mutation-scheme", flags.scheme,
                    "row: every row swaps with the given probability; offspring: one swap "
                    "per mutated offspring")
        ->capture_default_str()
        ->check(CLI::IsMember({"row", "offspring"}));
    cmd->add_option("--rmp", flags.rmp, "Random mating probability")->capture_default_str();
    cmd->add_option("--max-evals", flags.max_evals, "Evaluation budget")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "RNG seed")->capture_default_str();
}

sudoku::MutationScheme scheme_from_flag(const std::string& scheme) {
    return scheme == "row" ? sudoku::MutationScheme::per_row
                           : sudoku::MutationScheme::per_offspring;
}

sudoku::Puzzle resolve_puzzle(const std::string& ref) {
    if (std::filesystem::is_regular_file(ref)) return sudoku::load_puzzle_file(ref);
    const std::string path = harness::default_puzzle_dir() + "/" + ref + ".sdk";
    if (!std::filesystem::is_regular_file(path))
        throw std::runtime_error("unknown puzzle id or path: " + ref);
    return sudoku::load_puzzle_file(path);
}

std::string format_entropy(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

int cmd_solve(const std::vector<std::string>& paths, const EngineFlags& flags,
              const std::string& trace_path, bool verbose) {
    sudoku::TaskSet tasks;
    for (const std::string& path : paths) tasks.push_back(sudoku::load_puzzle_file(path));
    const int num_tasks = static_cast<int>(tasks.size());
    std::vector<std::string> ids;
    for (const auto& t : tasks) ids.push_back(t.id);

    const sudoku::MutationScheme scheme = scheme_from_flag(flags.scheme);
    mfea::EngineConfig cfg;
    cfg.population_size = flags.pop;
    cfg.mutation_probability =
        scheme == sudoku::MutationScheme::per_row ? 1.0 : flags.mutation;
    cfg.random_mating_probability = flags.rmp;
    cfg.max_evaluations = flags.max_evals;
    cfg.rng_seed = flags.seed;

    const auto hooks = sudoku::make_task_hooks(tasks, scheme, flags.mutation);
    const mfea::PopulationMetric<sudoku::Grid> entropy = [](const std::vector<sudoku::Grid>& gs) {
        return diversity::population_entropy(gs).total_entropy;
    };
    std::function<void(const mfea::TraceRow&)> on_generation;
    if (verbose) {
        on_generation = [&](const mfea::TraceRow& row) {
            std::cerr << "generation " << row.generation << ": evaluations " << row.evaluations;
            for (int t = 0; t < num_tasks; ++t)
                std::cerr << ", task " << t << " best cost " << row.best_cost[static_cast<std::size_t>(t)];
            std::cerr << ", entropy " << format_entropy(row.entropy) << '\n';
        };
    }

    const mfea::RunTrace trace = mfea::run<sudoku::Grid>(num_tasks, hooks, cfg, entropy, on_generation);

    const mfea::TraceRow& last = trace.rows.back();
    for (int t = 0; t < num_tasks; ++t) {
        const auto cost = static_cast<long long>(last.best_cost[static_cast<std::size_t>(t)]);
        std::cout << "task " << t << " (" << ids[static_cast<std::size_t>(t)] << "): best cost "
                  << cost << ", fitness " << (sudoku::kMaxRawFitness - cost) << ", "
                  << (trace.solved[static_cast<std::size_t>(t)] ? "solved" : "unsolved") << '\n';
    }
    std::cout << "generations: " << last.generation << ", evaluations: " << last.evaluations
              << '\n';

    if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write trace file: " + trace_path);
        out << "generation,evaluations";
        for (int t = 0; t < num_tasks; ++t) out << ",best_cost_task" << (t + 1);
        out << ",entropy\n";
        for (const auto& row : trace.rows) {
            out << row.generation << ',' << row.evaluations;
            for (int t = 0; t < num_tasks; ++t)
                out << ',' << static_cast<long long>(row.best_cost[static_cast<std::size_t>(t)]);
            out << ',' << format_entropy(row.entropy) << '\n';
        }
    }
    return 0;
}

int run_one_experiment(harness::Group group, harness::Mode mode, const std::string& out_dir,
                       const harness::ConfigOverrides& overrides, bool plot,
                       std::vector<harness::AggregatedCurves>& collected) {
    const harness::ExperimentSetup setup =
        harness::build_setup(group, mode, harness::default_puzzle_dir(), overrides);
    harness::AggregatedCurves curves = harness::run_experiment(setup);

    const std::string base = out_dir + "/" + harness::setup_name(setup);
    harness::emit_csv(curves, base + ".csv");
    harness::write_manifest(curves, base + "_manifest.txt");
    if (plot) {
        harness::emit_plot({&curves}, harness::PlotKind::convergence, base + "_convergence.svg");
        harness::emit_plot({&curves}, harness::PlotKind::entropy, base + "_entropy.svg");
    }

    int solved = 0;
    for (const auto& rec : curves.runs) solved += rec.focal_solved ? 1 : 0;
    const auto& final_row = curves.mean.back();
    std::cout << harness::setup_name(setup) << ": " << setup.repetitions << " runs, focal task "
              << setup.task_ids[0] << " solved in " << solved << "/" << setup.repetitions
              << ", final mean fitness " << format_entropy(final_row.mean_best_fitness[0])
              << ", final mean entropy " << format_entropy(final_row.mean_entropy) << '\n';

    collected.push_back(std::move(curves));
    return 0;
}

int cmd_experiment(const std::string& group_str, const std::string& mode_str,
                   const std::string& out_dir, const EngineFlags& flags, int runs, bool plot) {
    const harness::Group group = group_str == "A" ? harness::Group::A : harness::Group::B;
    harness::ConfigOverrides overrides;
    overrides.population_size = flags.pop;
    overrides.mutation_probability = flags.mutation;
    overrides.mutation_scheme = scheme_from_flag(flags.scheme);
    overrides.random_mating_probability = flags.rmp;
    overrides.max_evaluations = flags.max_evals;
    overrides.base_seed = flags.seed;
    overrides.repetitions = runs;

    std::filesystem::create_directories(out_dir);

    std::vector<harness::AggregatedCurves> collected;
    if (mode_str == "all") {
        for (harness::Mode mode : {harness::Mode::ST, harness::Mode::MT_CLONE,
                                   harness::Mode::MT_SYNERGY, harness::Mode::MT_UNRELATED})
            run_one_experiment(group, mode, out_dir, overrides, plot, collected);
        std::vector<const harness::AggregatedCurves*> refs;
        for (const auto& c : collected) refs.push_back(&c);
        const std::string prefix = out_dir + "/" + group_name(group);
        harness::emit_plot(refs, harness::PlotKind::convergence, prefix + "_convergence.svg");
        harness::emit_plot(refs, harness::PlotKind::entropy, prefix + "_entropy.svg");
    } else {
        const auto mode = harness::mode_from_name(mode_str);
        if (!mode) throw std::runtime_error("unknown mode: " + mode_str);
        run_one_experiment(group, *mode, out_dir, overrides, plot, collected);
    }
    return 0;
}

int cmd_puzzles_list() {
    const std::string dir = harness::default_puzzle_dir();
    std::cout << "id  fixed  log9(search space)\n";
    std::vector<sudoku::Puzzle> puzzles;
    for (const std::string& id : kBundledIds) {
        puzzles.push_back(sudoku::load_puzzle_file(dir + "/" + id + ".sdk"));
        const sudoku::Puzzle& p = puzzles.back();
        std::cout << p.id << "  " << p.fixed_count << "     "
                  << sudoku::log9_search_space(p.fixed_count) << '\n';
    }
    std::cout << "\npairwise conditioned sizes, log9(81 - fp1 - fp2):\n";
    for (int base : {0, 3}) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const auto& a = puzzles[static_cast<std::size_t>(base + i)];
                const auto& b = puzzles[static_cast<std::size_t>(base + j)];
                std::cout << a.id << "+" << b.id << ": "
                          << sudoku::log9_search_space(a.fixed_count, b.fixed_count) << '\n';
            }
        }
    }
    return 0;
}

int cmd_puzzles_show(const std::string& id) {
    const sudoku::Puzzle p = resolve_puzzle(id);
    std::cout << sudoku::givens_text(p);
    return 0;
}

int cmd_puzzles_check(const std::string& path) {
    const sudoku::Puzzle p = sudoku::load_puzzle_file(path);
    std::cout << "ok: " << p.id << " has " << p.fixed_count << " givens\n";
    return 0;
}

int cmd_oracle_solve(const std::string& ref) {
    const sudoku::Puzzle p = resolve_puzzle(ref);
    const auto solution = sudoku::exact_solve(p);
    if (!solution) throw std::runtime_error("puzzle " + p.id + " is unsatisfiable");
    std::cout << sudoku::to_text(*solution);
    return 0;
}

int cmd_oracle_similarity(const std::string& ref_a, const std::string& ref_b) {
    const sudoku::Puzzle a = resolve_puzzle(ref_a);
    const sudoku::Puzzle b = resolve_puzzle(ref_b);
    const auto sol_a = sudoku::exact_solve(a);
    if (!sol_a) throw std::runtime_error("puzzle " + a.id + " is unsatisfiable");
    const auto sol_b = sudoku::exact_solve(b);
    if (!sol_b) throw std::runtime_error("puzzle " + b.id + " is unsatisfiable");
    std::cout << sudoku::solution_similarity(*sol_a, *sol_b) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multifactorial evolutionary optimization on Sudoku tasks"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Run the evolutionary engine on 1..K puzzle files");
    std::vector<std::string> solve_paths;
    EngineFlags solve_flags;
    std::string trace_path;
    bool verbose = false;
    solve->add_option("puzzles", solve_paths, "Puzzle files (one task per file)")
        ->required()
        ->expected(-1);
    add_engine_flags(solve, solve_flags);
    solve->add_option("--trace", trace_path, "Write the full run trace as CSV");
    solve->add_flag("--verbose", verbose, "Per-generation log line on stderr");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a single-/multitasking experiment");
    std::string group_str;
    std::string mode_str;
    std::string out_dir = "results";
    int runs = 20;
    bool plot = false;
    EngineFlags exp_flags;
    experiment->add_option("--group", group_str, "Puzzle group")
        ->required()
        ->check(CLI::IsMember({"A", "B"}));
    experiment->add_option("--mode", mode_str, "Setup mode")
        ->required()
        ->check(CLI::IsMember({"st", "clone", "synergy", "unrelated", "all"}));
    experiment->add_option("--runs", runs, "Independent runs per setup")->capture_default_str();
    experiment->add_option("--out", out_dir, "Output directory")->capture_default_str();
    experiment->add_flag("--plot", plot, "Emit convergence and entropy SVG charts");
    add_engine_flags(experiment, exp_flags);

    // puzzles
    auto* puzzles = app.add_subcommand("puzzles", "Inspect bundled or external puzzles");
    puzzles->require_subcommand(1);
    auto* puzzles_list = puzzles->add_subcommand("list", "List bundled puzzles with search-space sizes");
    auto* puzzles_show = puzzles->add_subcommand("show", "Print a puzzle statement");
    std::string show_id;
    puzzles_show->add_option("id", show_id, "Puzzle id or path")->required();
    auto* puzzles_check = puzzles->add_subcommand("check", "Validate an external puzzle file");
    std::string check_path;
    puzzles_check->add_option("path", check_path, "Puzzle file")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact backtracking solver utilities");
    oracle->require_subcommand(1);
    auto* oracle_solve = oracle->add_subcommand("solve", "Print the exact solution");
    std::string oracle_ref;
    oracle_solve->add_option("puzzle", oracle_ref, "Puzzle id or path")->required();
    auto* oracle_sim = oracle->add_subcommand("similarity", "Cells shared by two exact solutions");
    std::string sim_a;
    std::string sim_b;
    oracle_sim->add_option("first", sim_a, "Puzzle id or path")->required();
    oracle_sim->add_option("second", sim_b, "Puzzle id or path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_paths, solve_flags, trace_path, verbose);
        if (experiment->parsed())
            return cmd_experiment(group_str, mode_str, out_dir, exp_flags, runs, plot);
        if (puzzles->parsed()) {
            if (puzzles_list->parsed()) return cmd_puzzles_list();
            if (puzzles_show->parsed()) return cmd_puzzles_show(show_id);
            if (puzzles_check->parsed()) return cmd_puzzles_check(check_path);
        }
        if (oracle->parsed()) {
            if (oracle_solve->parsed()) return cmd_oracle_solve(oracle_ref);
            if (oracle_sim->parsed()) return cmd_oracle_similarity(sim_a, sim_b);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
