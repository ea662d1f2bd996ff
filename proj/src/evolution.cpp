#include "roboevo/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "roboevo/descriptors.hpp"
#include "roboevo/experiment.hpp"

namespace roboevo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

json individual_to_json(const Individual& individual) {
    json j;
    j["id"] = individual.id;
    j["fitness"] = individual.fitness.value();
    j["la_count"] = individual.linear_actuator_count;
    const DescriptorVector& d = individual.descriptors.value();
    json desc;
    const auto values = d.as_array();
    for (std::size_t i = 0; i < descriptor_names().size(); ++i) {
        desc[descriptor_names()[i]] = values[i];
    }
    j["descriptors"] = desc;
    j["body_genome"] = json::parse(serialize_genome(individual.body_genome));
    j["brain_genome"] = json::parse(serialize_genome(individual.brain_genome));
    return j;
}

Individual individual_from_json(const json& j, const DecodeLimits& limits) {
    Individual individual;
    individual.id = j.at("id").get<std::uint64_t>();
    individual.body_genome = deserialize_genome(j.at("body_genome").dump());
    individual.brain_genome = deserialize_genome(j.at("brain_genome").dump());
    individual.body = decode_body(individual.body_genome, limits);
    individual.fitness = j.at("fitness").get<double>();
    individual.linear_actuator_count = j.at("la_count").get<int>();
    const json& desc = j.at("descriptors");
    DescriptorVector d;
    d.branching = desc.at("branching").get<double>();
    d.coverage = desc.at("coverage").get<double>();
    d.rel_joints = desc.at("rel_joints").get<double>();
    d.rel_limbs = desc.at("rel_limbs").get<double>();
    d.rel_limb_length = desc.at("rel_limb_length").get<double>();
    d.proportion = desc.at("proportion").get<double>();
    d.absolute_size = desc.at("absolute_size").get<int>();
    d.symmetry = desc.at("symmetry").get<double>();
    individual.descriptors = d;
    return individual;
}

IndividualRecord record_of(const Individual& individual) {
    IndividualRecord record;
    record.id = individual.id;
    record.fitness = individual.fitness.value();
    record.descriptors = individual.descriptors.value();
    record.la_count = individual.linear_actuator_count;
    return record;
}

struct RunState {
    std::vector<Individual> population;
    std::uint64_t next_id = 0;
    long instabilities = 0;  // current generation only
};

struct EvaluationRow {
    std::uint64_t id = 0;
    FitnessBreakdown breakdown;
};

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

// One row per evaluation performed this generation (the offspring, or the
// whole initial population at generation 0).
std::string fitness_csv(const std::vector<EvaluationRow>& rows) {
    std::string out = "id,fitness,distProjection,lengthTraj,delta,penalty\n";
    for (const auto& row : rows) {
        out += std::to_string(row.id);
        out += ',';
        append_double(out, row.breakdown.fitness);
        out += ',';
        append_double(out, row.breakdown.dist_projection);
        out += ',';
        append_double(out, row.breakdown.length_traj);
        out += ',';
        append_double(out, row.breakdown.delta);
        out += ',';
        append_double(out, row.breakdown.penalty);
        out += '\n';
    }
    return out;
}

json state_to_json(const RunState& state, const Rng& rng, const InnovationRegistry& body_registry,
                   const InnovationRegistry& brain_registry, int generation) {
    json j;
    j["format_version"] = 1;
    j["generation"] = generation;
    j["next_individual_id"] = state.next_id;
    j["instabilities"] = state.instabilities;
    j["rng_state"] = rng.state();
    j["body_registry"] = {{"next_node_id", body_registry.next_node_id()},
                          {"next_innovation", body_registry.next_innovation()}};
    j["brain_registry"] = {{"next_node_id", brain_registry.next_node_id()},
                           {"next_innovation", brain_registry.next_innovation()}};
    return j;
}

void checkpoint(const fs::path& out, int generation, const RunState& state, const Rng& rng,
                const InnovationRegistry& body_registry, const InnovationRegistry& brain_registry,
                const std::string& config_snapshot, const std::vector<EvaluationRow>& evaluations) {
    try {
        const fs::path dir = out / generation_dir_name(generation);
        fs::create_directories(dir);
        write_file(dir / "fitness.csv", fitness_csv(evaluations));

        json population = json::array();
        for (const auto& individual : state.population) {
            population.push_back(individual_to_json(individual));
        }
        json pop_doc;
        pop_doc["format_version"] = 1;
        pop_doc["individuals"] = population;
        write_file(dir / "population.json", pop_doc.dump(2) + "\n");

        GenerationRecord record;
        for (const auto& individual : state.population) {
            record.population.push_back(record_of(individual));
        }
        write_file(dir / "metrics.csv", metrics_csv(record));

        const Individual* best = &state.population.front();
        for (const auto& individual : state.population) {
            if (individual.fitness.value() > best->fitness.value()) {
                best = &individual;
            }
        }
        json best_doc;
        best_doc["format_version"] = 1;
        best_doc["id"] = best->id;
        best_doc["fitness"] = best->fitness.value();
        write_file(dir / "best.json", best_doc.dump(2) + "\n");
        // Standalone documents, directly consumable by `evaluate`.
        write_file(dir / "best_body.json", serialize(best->body));
        write_file(dir / "best_brain.json", serialize_genome(best->brain_genome));
        write_file(dir / "best_body_genome.json", serialize_genome(best->body_genome));

        write_file(dir / "config.snapshot", config_snapshot);
        // state.json last: its presence marks the generation complete.
        write_file(dir / "state.json",
                   state_to_json(state, rng, body_registry, brain_registry, generation).dump(2) +
                       "\n");
    } catch (const std::exception& e) {
        throw std::runtime_error("checkpoint failed at generation " + std::to_string(generation) +
                                 ": " + e.what());
    }
}

// Highest generation with a valid completion marker, or -1.
int last_complete_generation(const fs::path& out, int max_generation) {
    int last = -1;
    for (int g = 0; g <= max_generation; ++g) {
        const fs::path state_path = out / generation_dir_name(g) / "state.json";
        if (!fs::exists(state_path)) {
            break;
        }
        try {
            const json j = json::parse(read_file(state_path));
            if (j.at("generation").get<int>() != g) {
                break;
            }
        } catch (const std::exception&) {
            break;
        }
        last = g;
    }
    return last;
}

}  // namespace

Heightmap make_terrain(const EnvironmentConfig& environment) {
    if (environment.type == EnvironmentConfig::Type::Plain) {
        return Heightmap::plain(environment.extent, environment.cell_size);
    }
    return Heightmap::rough(environment.extent, environment.amplitude, environment.wavelength,
                            environment.seed, environment.cell_size);
}

std::size_t binary_tournament(const std::vector<double>& pool_fitness, Rng& rng, int k) {
    if (pool_fitness.empty()) {
        throw std::invalid_argument("binary_tournament: empty pool");
    }
    std::vector<std::size_t> drawn;
    drawn.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        drawn.push_back(static_cast<std::size_t>(rng.uniform_index(pool_fitness.size())));
    }
    double best = pool_fitness[drawn[0]];
    for (const std::size_t index : drawn) {
        best = std::max(best, pool_fitness[index]);
    }
    std::vector<std::size_t> winners;
    for (const std::size_t index : drawn) {
        if (pool_fitness[index] == best) {
            winners.push_back(index);
        }
    }
    return winners.size() == 1 ? winners[0]
                               : winners[rng.uniform_index(winners.size())];
}

EvaluationResult evaluate_robot(const BodyGraph& body, const Cppn& brain_genome,
                                const Heightmap& terrain, const EvolutionConfig& config) {
    DecodeLimits limits = config.decode;
    limits.linear_actuator_enabled = config.linear_actuator_enabled;
    const BrainSpec brain = decode_brain(brain_genome, body, limits);

    EvaluationResult result;
    result.trajectory = simulate(body, brain, terrain, config.simulation, config.controller);
    if (result.trajectory.unstable || result.trajectory.samples.size() < 2) {
        result.fitness = 0.0;
        if (result.trajectory.diagnostic.empty()) {
            result.trajectory.diagnostic = "trajectory too short";
        }
        return result;
    }
    result.breakdown = evaluate_directed(result.trajectory, config.fitness);
    result.fitness = result.breakdown.fitness;
    return result;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int thread_count = std::min<int>(workers, static_cast<int>(count));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) {
        threads.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& thread : threads) {
        thread.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

RunArchive evolve(const EvolutionConfig& config, const EvolveOptions& options) {
    if (config.mu < 1 || config.lambda < 1 || config.mu < config.lambda) {
        throw std::invalid_argument("evolve: requires mu >= lambda >= 1");
    }
    if (config.tournament_size < 2) {
        throw std::invalid_argument("evolve: tournament size must be at least 2");
    }
    if (config.generations < 0) {
        throw std::invalid_argument("evolve: generations must be non-negative");
    }

    const Heightmap terrain = make_terrain(config.environment);
    DecodeLimits limits = config.decode;
    limits.linear_actuator_enabled = config.linear_actuator_enabled;

    Rng rng(config.seed);
    InnovationRegistry body_registry(minimal_reserved_nodes(kBodyInputs, kBodyOutputs),
                                     minimal_reserved_innovations(kBodyInputs, kBodyOutputs));
    InnovationRegistry brain_registry(minimal_reserved_nodes(kBrainInputs, kBrainOutputs),
                                      minimal_reserved_innovations(kBrainInputs, kBrainOutputs));

    RunArchive archive;
    archive.seed = config.seed;
    RunState state;
    int start_generation = 0;

    const bool use_disk = !options.out_dir.empty();
    const fs::path out(options.out_dir);
    const std::string config_snapshot = evolution_config_json(config);

    std::vector<EvaluationRow> evaluations;
    const auto evaluate_population = [&](std::vector<Individual*>& todo) {
        std::atomic<long> instabilities{0};
        evaluations.assign(todo.size(), EvaluationRow{});
        parallel_for(todo.size(), options.workers, [&](std::size_t i) {
            Individual& individual = *todo[i];
            individual.body = decode_body(individual.body_genome, limits);
            const EvaluationResult evaluation =
                evaluate_robot(individual.body, individual.brain_genome, terrain, config);
            if (evaluation.trajectory.unstable) {
                instabilities.fetch_add(1);
            }
            individual.fitness = evaluation.fitness;
            individual.descriptors = descriptor_vector(individual.body);
            individual.linear_actuator_count = count_linear_actuators(individual.body);
            evaluations[i] = {individual.id, evaluation.breakdown};
        });
        state.instabilities = instabilities.load();
    };

    const auto record_generation = [&](int generation) {
        GenerationRecord record;
        record.instabilities = state.instabilities;
        for (const auto& individual : state.population) {
            record.population.push_back(record_of(individual));
        }
        archive.generations.push_back(record);
        if (use_disk) {
            checkpoint(out, generation, state, rng, body_registry, brain_registry, config_snapshot,
                       evaluations);
        }
        if (options.progress) {
            double best = record.population.front().fitness;
            double mean = 0.0;
            for (const auto& r : record.population) {
                best = std::max(best, r.fitness);
                mean += r.fitness;
            }
            mean /= static_cast<double>(record.population.size());
            options.progress(generation, best, mean);
        }
    };

    if (use_disk) {
        if (options.resume && fs::exists(out)) {
            const int last = last_complete_generation(out, config.generations);
            if (last >= 0) {
                const fs::path last_dir = out / generation_dir_name(last);
                const std::string stored_snapshot = read_file(last_dir / "config.snapshot");
                if (stored_snapshot != config_snapshot) {
                    throw std::runtime_error("resume: configuration does not match checkpoint in " +
                                             out.string());
                }
                for (int g = 0; g <= last; ++g) {
                    archive.generations.push_back(parse_metrics_csv(
                        read_file(out / generation_dir_name(g) / "metrics.csv")));
                }
                const json state_doc = json::parse(read_file(last_dir / "state.json"));
                state.next_id = state_doc.at("next_individual_id").get<std::uint64_t>();
                state.instabilities = state_doc.at("instabilities").get<long>();
                archive.generations.back().instabilities = state.instabilities;
                rng.set_state(state_doc.at("rng_state").get<std::array<std::uint64_t, 4>>());
                body_registry.restore(
                    state_doc.at("body_registry").at("next_node_id").get<int>(),
                    state_doc.at("body_registry").at("next_innovation").get<std::uint64_t>());
                brain_registry.restore(
                    state_doc.at("brain_registry").at("next_node_id").get<int>(),
                    state_doc.at("brain_registry").at("next_innovation").get<std::uint64_t>());
                const json pop_doc = json::parse(read_file(last_dir / "population.json"));
                for (const auto& j : pop_doc.at("individuals")) {
                    state.population.push_back(individual_from_json(j, limits));
                }
                start_generation = last + 1;
            }
        } else if (fs::exists(out)) {
            fs::remove_all(out);  // fresh start without --resume
        }
    }

    if (start_generation == 0) {
        state.population.clear();
        state.population.reserve(static_cast<std::size_t>(config.mu));
        for (int i = 0; i < config.mu; ++i) {
            Individual individual;
            individual.id = state.next_id++;
            individual.body_genome =
                minimal_cppn(kBodyInputs, kBodyOutputs, config.mutation.weight_range, rng);
            individual.brain_genome =
                minimal_cppn(kBrainInputs, kBrainOutputs, config.mutation.weight_range, rng);
            state.population.push_back(std::move(individual));
        }
        std::vector<Individual*> todo;
        for (auto& individual : state.population) {
            todo.push_back(&individual);
        }
        evaluate_population(todo);
        record_generation(0);
        start_generation = 1;
    }

    for (int generation = start_generation; generation <= config.generations; ++generation) {
        body_registry.begin_epoch();
        brain_registry.begin_epoch();

        std::vector<double> fitness;
        fitness.reserve(state.population.size());
        for (const auto& individual : state.population) {
            fitness.push_back(individual.fitness.value());
        }

        std::vector<Individual> offspring;
        offspring.reserve(static_cast<std::size_t>(config.lambda));
        for (int o = 0; o < config.lambda; ++o) {
            const std::size_t a = binary_tournament(fitness, rng, config.tournament_size);
            const std::size_t b = binary_tournament(fitness, rng, config.tournament_size);
            const Individual& parent_a = state.population[a];
            const Individual& parent_b = state.population[b];
            Individual child;
            child.id = state.next_id++;
            child.body_genome =
                mutate(crossover(parent_a.body_genome, parent_b.body_genome, fitness[a], fitness[b],
                                 rng),
                       config.mutation, body_registry, rng);
            child.brain_genome =
                mutate(crossover(parent_a.brain_genome, parent_b.brain_genome, fitness[a],
                                 fitness[b], rng),
                       config.mutation, brain_registry, rng);
            offspring.push_back(std::move(child));
        }

        std::vector<Individual*> todo;
        for (auto& individual : offspring) {
            todo.push_back(&individual);
        }
        evaluate_population(todo);

        // Survivor selection: mu tournaments over the combined pool, winners
        // removed. Not elitist; the best individual can be lost.
        std::vector<Individual> pool = std::move(state.population);
        for (auto& individual : offspring) {
            pool.push_back(std::move(individual));
        }
        std::vector<std::size_t> remaining(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            remaining[i] = i;
        }
        state.population.clear();
        for (int s = 0; s < config.mu; ++s) {
            std::vector<double> remaining_fitness;
            remaining_fitness.reserve(remaining.size());
            for (const std::size_t index : remaining) {
                remaining_fitness.push_back(pool[index].fitness.value());
            }
            const std::size_t winner_pos = binary_tournament(remaining_fitness, rng,
                                                             config.tournament_size);
            state.population.push_back(std::move(pool[remaining[winner_pos]]));
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(winner_pos));
        }
        std::sort(state.population.begin(), state.population.end(),
                  [](const Individual& a, const Individual& b) { return a.id < b.id; });

        record_generation(generation);
    }
    return archive;
}

std::vector<RunArchive> run_experiment(const EvolutionConfig& config, int repetitions,
                                       const EvolveOptions& options, const RunProgress& progress) {
    if (repetitions < 1) {
        throw std::invalid_argument("run_experiment: repetitions must be at least 1");
    }
    std::vector<RunArchive> archives;
    archives.reserve(static_cast<std::size_t>(repetitions));
    for (int run = 0; run < repetitions; ++run) {
        EvolutionConfig run_config = config;
        run_config.seed = config.seed + static_cast<std::uint64_t>(run);
        EvolveOptions run_options = options;
        if (!options.out_dir.empty()) {
            run_options.out_dir = (fs::path(options.out_dir) / run_dir_name(run)).string();
        }
        if (progress) {
            run_options.progress = [&progress, run](int generation, double best, double mean) {
                progress(run, generation, best, mean);
            };
        }
        archives.push_back(evolve(run_config, run_options));
    }
    return archives;
}

}  // namespace roboevo
