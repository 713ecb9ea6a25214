#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfea/engine.hpp"
#include "mfea/sudoku.hpp"

// Experiment harness: builds the eight single-/multitasking setups over the
// bundled puzzle groups, executes repeated seeded runs, aggregates
// convergence and entropy curves, and emits CSV / SVG / manifest artifacts.

namespace harness {

enum class Group { A, B };
enum class Mode { ST, MT_CLONE, MT_SYNERGY, MT_UNRELATED };

const char* group_name(Group group);               // "A"
std::string mode_name(Mode mode);                  // "synergy"
std::string mode_label(Mode mode);                 // "MT(synergy)"
std::optional<Mode> mode_from_name(const std::string& name);

struct ExperimentSetup {
    Group group = Group::A;
    Mode mode = Mode::ST;
    std::vector<std::string> task_ids;  // resolved puzzle ids, e.g. {"A1", "A2"}
    sudoku::TaskSet tasks;
    mfea::EngineConfig engine;  // mutation_probability holds the user-facing p_m
    sudoku::MutationScheme mutation_scheme = sudoku::MutationScheme::per_offspring;
    int repetitions = 20;
    std::uint64_t base_seed = 42;
    std::string puzzle_dir;
};

std::string setup_name(const ExperimentSetup& setup);  // "A_synergy"

struct ConfigOverrides {
    std::optional<int> population_size;
    std::optional<double> mutation_probability;
    std::optional<double> random_mating_probability;
    std::optional<std::int64_t> max_evaluations;
    std::optional<int> repetitions;
    std::optional<std::uint64_t> base_seed;
    std::optional<sudoku::MutationScheme> mutation_scheme;
};

// Task resolution per mode: ST -> [X1], clone -> [X1, X1],
// synergy -> [X1, X2], unrelated -> [X1, X3]. Assets are validated on load
// (well-posed and solvable).
ExperimentSetup build_setup(Group group, Mode mode, const std::string& puzzle_dir,
                            const ConfigOverrides& overrides = {});

struct RunRecord {
    std::uint64_t seed = 0;
    bool solved_all = false;
    bool focal_solved = false;
    std::int64_t evals_to_focal_solve = 0;  // budget-censored
    int native_rows = 0;                    // trace rows before padding
    mfea::RunTrace trace;                   // padded to the experiment length
};

struct MeanRow {
    int generation = 0;
    std::int64_t evaluations = 0;
    std::vector<double> mean_best_fitness;  // per task slot
    double mean_entropy = 0.0;
};

struct AggregatedCurves {
    ExperimentSetup setup;
    std::vector<RunRecord> runs;
    std::vector<MeanRow> mean;
};

// Engine config actually passed to the engine: under the per-row scheme the
// per-offspring gate is opened (1.0) and p_m moves into the mutate hook.
mfea::EngineConfig effective_engine_config(const ExperimentSetup& setup);

// Runs `repetitions` seeded runs (base_seed + run index). Runs that solve
// early are padded by holding their final values so the per-generation means
// stay defined; padded rows keep evaluations = N * (generation + 1). The
// result is independent of whether runs execute in parallel.
AggregatedCurves run_experiment(const ExperimentSetup& setup, bool parallel = true);

double fitness_from_cost(double cost);

// Writes the per-run CSV at csv_path plus a companion `*_mean.csv`.
void emit_csv(const AggregatedCurves& curves, const std::string& csv_path);

enum class PlotKind { convergence, entropy };

// One polyline per setup. Convergence plots mean focal-task best fitness vs
// evaluations (y capped at 162); entropy plots mean entropy vs generation
// (y in [0, 1]).
void emit_plot(const std::vector<const AggregatedCurves*>& curves, PlotKind kind,
               const std::string& path);

// Plain key=value provenance record: group, mode, engine config, base seed,
// asset checksums, and per-run terminal statistics.
void write_manifest(const AggregatedCurves& curves, const std::string& path);

// MFEA_PUZZLE_DIR if set, else ./puzzles if present, else the bundled assets.
std::string default_puzzle_dir();

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace harness
