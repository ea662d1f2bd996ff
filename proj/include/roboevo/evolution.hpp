#pragma once

#include <functional>
#include <string>
#include <vector>

#include "roboevo/archive.hpp"
#include "roboevo/decoder.hpp"
#include "roboevo/fitness.hpp"
#include "roboevo/simulation.hpp"
#include "roboevo/terrain.hpp"

namespace roboevo {

struct EnvironmentConfig {
    enum class Type { Plain, Rough };
    Type type = Type::Plain;
    double extent = 20.0;       // m
    double cell_size = 0.1;     // m
    double amplitude = 0.08;    // m, rough only
    double wavelength = 0.8;    // m, rough only
    std::uint64_t seed = 42;    // rough only
};

Heightmap make_terrain(const EnvironmentConfig& environment);

struct EvolutionConfig {
    int mu = 100;
    int lambda = 50;
    int generations = 300;
    int runs = 20;
    int tournament_size = 2;
    std::uint64_t seed = 1;
    bool linear_actuator_enabled = true;
    EnvironmentConfig environment;
    SimConfig simulation;
    CpgConfig controller;
    FitnessParams fitness;
    MutationParams mutation;
    DecodeLimits decode;
};

// Winner index within pool_fitness. Draws k contestants independently and
// uniformly (a contestant can be drawn twice, so with two candidates the
// better one is selected with probability 3/4); the highest fitness wins and
// ties are broken uniformly among the drawn winners. Throws on an empty pool.
std::size_t binary_tournament(const std::vector<double>& pool_fitness, Rng& rng, int k = 2);

struct EvaluationResult {
    Trajectory trajectory;
    FitnessBreakdown breakdown;
    double fitness = 0.0;  // 0 with a diagnostic when the simulation went unstable
};

// Decode brain -> simulate -> score. The shared pipeline behind population
// evaluation and the evaluate CLI command.
EvaluationResult evaluate_robot(const BodyGraph& body, const Cppn& brain_genome,
                                const Heightmap& terrain, const EvolutionConfig& config);

struct EvolveOptions {
    std::string out_dir;  // empty: in-memory only, no checkpoints
    int workers = 1;
    bool resume = false;
    std::function<void(int generation, double best, double mean)> progress;
};

// One steady-state (mu+lambda) run. Generation 0 is mu random minimal-CPPN
// individuals; each later generation creates lambda offspring (two binary
// tournaments -> crossover -> mutation, body and brain genomes independently),
// evaluates them in parallel, then fills the next population with mu
// sequential binary tournaments over the combined pool, removing each winner.
// With an out_dir every generation is checkpointed (population.json,
// metrics.csv, best.json, config.snapshot, then state.json as the completion
// marker) and a resumed run continues bit-exactly from the last complete
// generation. Everything downstream of the seed is deterministic and
// independent of the worker count.
RunArchive evolve(const EvolutionConfig& config, const EvolveOptions& options = {});

// repetitions independent runs with derived seeds (seed + run index), written
// to run_000, run_001, ... under options.out_dir. With resume, completed runs
// are left untouched. progress, when set, replaces options.progress.
using RunProgress = std::function<void(int run, int generation, double best, double mean)>;
std::vector<RunArchive> run_experiment(const EvolutionConfig& config, int repetitions,
                                       const EvolveOptions& options = {},
                                       const RunProgress& progress = {});

// Index-parallel helper; results must only depend on the index, never on the
// schedule. Worker exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace roboevo
