// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier end-to-end checks than the unit tests; the evolution
// criteria run real desk-scale experiments.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "roboevo/analysis.hpp"
#include "roboevo/descriptors.hpp"
#include "roboevo/evolution.hpp"
#include "roboevo/experiment.hpp"

using namespace roboevo;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), seconds, detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        ++g_failures;
    }
}

// budget_seconds <= 0 means no stated runtime bound.
template <typename Fn>
void run_criterion(int number, const std::string& name, double budget_seconds, Fn&& fn) {
    const auto start = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (pass && budget_seconds > 0.0 && seconds > budget_seconds) {
        pass = false;
        detail += " [exceeded " + std::to_string(budget_seconds) + " s budget]";
    }
    report(number, name, pass, seconds, detail);
}

// ---- criterion 1: fitness oracle suite --------------------------------

double oracle_eq1(const std::vector<std::pair<double, double>>& points, double beta0,
                  double epsilon, double penalty_coefficient) {
    const double dx = points.back().first - points.front().first;
    const double dy = points.back().second - points.front().second;
    const double ux = std::cos(beta0);
    const double uy = std::sin(beta0);
    const double dist_projection = dx * ux + dy * uy;
    double length = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        length += std::hypot(points[i].first - points[i - 1].first,
                             points[i].second - points[i - 1].second);
    }
    const double displacement = std::hypot(dx, dy);
    double delta = 0.0;
    if (displacement > 0.0) {
        delta = std::acos(std::min(1.0, std::max(-1.0, dist_projection / displacement)));
    }
    const double ox = dx - dist_projection * ux;
    const double oy = dy - dist_projection * uy;
    const double penalty = penalty_coefficient * std::hypot(ox, oy);
    return std::abs(dist_projection) / (length + epsilon) *
           (dist_projection / (delta + 1.0) - penalty);
}

Trajectory points_to_trajectory(const std::vector<std::pair<double, double>>& points) {
    Trajectory trajectory;
    for (std::size_t i = 0; i < points.size(); ++i) {
        trajectory.samples.push_back(
            {static_cast<double>(i) * 0.1, points[i].first, points[i].second});
    }
    return trajectory;
}

std::vector<std::pair<double, double>> line_points(double bearing, double length, int segments) {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i <= segments; ++i) {
        const double d = length * i / segments;
        points.push_back({d * std::cos(bearing), d * std::sin(bearing)});
    }
    return points;
}

bool criterion_fitness(std::string& detail) {
    const FitnessParams params;
    std::vector<std::vector<std::pair<double, double>>> cases;

    // straight toward / orthogonal to / backward from the target
    cases.push_back(line_points(params.beta0, 1.0, 10));
    cases.push_back(line_points(params.beta0 + M_PI / 2.0, 1.0, 8));
    cases.push_back(line_points(params.beta0 + M_PI, 1.0, 10));
    for (int i = 0; i < 6; ++i) {
        cases.push_back(line_points(0.7 * i, 0.2 + 0.5 * i, 5 + 3 * i));
    }
    // zig-zags
    Rng rng(1234);
    for (int i = 0; i < 12; ++i) {
        std::vector<std::pair<double, double>> walk{{0.0, 0.0}};
        for (int s = 0; s < 25; ++s) {
            walk.push_back({walk.back().first + rng.uniform(-0.2, 0.3),
                            walk.back().second + rng.uniform(-0.25, 0.25)});
        }
        cases.push_back(walk);
    }
    if (cases.size() < 20) {
        detail = "fewer than 20 cases";
        return false;
    }
    for (const auto& points : cases) {
        const double expected =
            oracle_eq1(points, params.beta0, params.epsilon, params.penalty_coefficient);
        const double actual = evaluate_directed(points_to_trajectory(points), params).fitness;
        if (std::abs(actual - expected) > 1e-9) {
            detail = "mismatch vs oracle: " + std::to_string(actual) + " vs " +
                     std::to_string(expected);
            return false;
        }
    }

    // the three worked examples
    const FitnessBreakdown straight =
        evaluate_directed(points_to_trajectory(line_points(params.beta0, 1.0, 10)), params);
    if (std::abs(straight.fitness - 1.0) > 1e-9 ||
        std::abs(straight.dist_projection - 1.0) > 1e-12 ||
        std::abs(straight.length_traj - 1.0) > 1e-12) {
        detail = "straight-line example failed";
        return false;
    }
    const FitnessBreakdown stationary = evaluate_directed(
        points_to_trajectory({{0.2, 0.1}, {0.2, 0.1}, {0.2, 0.1}}), params);
    if (stationary.fitness != 0.0 || stationary.dist_projection != 0.0) {
        detail = "stationary example failed";
        return false;
    }
    FitnessParams heavy_penalty = params;
    heavy_penalty.penalty_coefficient = 10.0;
    const FitnessBreakdown orthogonal = evaluate_directed(
        points_to_trajectory(line_points(params.beta0 + M_PI / 2.0, 1.0, 8)), heavy_penalty);
    if (std::abs(orthogonal.fitness) > 1e-12) {
        detail = "orthogonal example failed";
        return false;
    }
    detail = std::to_string(cases.size()) + " trajectories within 1e-9";
    return true;
}

// ---- criterion 2: descriptor golden suite ------------------------------

bool vector_matches(const DescriptorVector& d, const std::array<double, 8>& expected) {
    const auto values = d.as_array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i] - expected[i]) > 1e-12) {
            return false;
        }
    }
    return true;
}

bool criterion_descriptors(std::string& detail) {
    if (!vector_matches(descriptor_vector(fixtures::core_only()),
                        {0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0})) {
        detail = "core-only fixture mismatch";
        return false;
    }
    if (!vector_matches(descriptor_vector(fixtures::chain5()),
                        {0.0, 1.0, 0.0, 0.25, 1.0, 0.2, 5.0, 1.0})) {
        detail = "5-chain fixture mismatch";
        return false;
    }
    if (!vector_matches(descriptor_vector(fixtures::plus5()),
                        {1.0, 5.0 / 9.0, 0.0, 1.0, 0.25, 1.0, 5.0, 1.0})) {
        detail = "plus-shape fixture mismatch";
        return false;
    }

    Rng rng(777);
    InnovationRegistry registry(minimal_reserved_nodes(kBodyInputs, kBodyOutputs),
                                minimal_reserved_innovations(kBodyInputs, kBodyOutputs));
    for (int i = 0; i < 1000; ++i) {
        registry.begin_epoch();
        const Cppn genome = fixtures::random_genome(kBodyInputs, kBodyOutputs, registry, rng, 10);
        const BodyGraph body = decode_body(genome, DecodeLimits{});
        const DescriptorVector d = descriptor_vector(body);
        for (const double value :
             {d.branching, d.coverage, d.rel_joints, d.rel_limbs, d.rel_limb_length, d.proportion,
              d.symmetry, d.absolute_size_normalized()}) {
            if (value < 0.0 || value > 1.0) {
                detail = "descriptor out of [0,1] on random body " + std::to_string(i);
                return false;
            }
        }
    }
    detail = "3 golden fixtures + 1000 random bodies";
    return true;
}

// ---- criterion 3: Wilcoxon exactness -----------------------------------

double brute_force_p(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size();
    std::vector<double> ranks(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        int less = 0;
        int equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            less += std::abs(diffs[j]) < std::abs(diffs[i]) ? 1 : 0;
            equal += std::abs(diffs[j]) == std::abs(diffs[i]) ? 1 : 0;
        }
        ranks[i] = less + (equal + 1) / 2.0;
    }
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) {
            w += ranks[i];
        }
    }
    std::uint64_t le = 0;
    std::uint64_t ge = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                t += ranks[i];
            }
        }
        le += t <= w ? 1 : 0;
        ge += t >= w ? 1 : 0;
    }
    return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

bool criterion_wilcoxon(std::string& detail) {
    const TestResult known = wilcoxon_signed_rank({1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0});
    if (known.statistic != 21.0 || known.p_value != 0.03125) {
        detail = "n=6 all-positive case failed";
        return false;
    }
    Rng rng(4242);
    int tested = 0;
    while (tested < 200) {
        const int n = 5 + static_cast<int>(rng.uniform_index(8));  // 5..12
        std::vector<double> xs;
        std::vector<double> ys;
        std::vector<double> diffs;
        for (int i = 0; i < n; ++i) {
            const double d = std::round(rng.uniform(-5.0, 5.0)) / 2.0;
            const double y = std::round(rng.uniform(-3.0, 3.0));
            xs.push_back(y + d);
            ys.push_back(y);
            if (d != 0.0) {
                diffs.push_back(d);
            }
        }
        if (diffs.size() < 5) {
            continue;
        }
        const double actual = wilcoxon_signed_rank(xs, ys).p_value;
        const double expected = brute_force_p(diffs);
        if (std::abs(actual - expected) > 1e-12) {
            detail = "p mismatch: " + std::to_string(actual) + " vs " + std::to_string(expected);
            return false;
        }
        ++tested;
    }
    detail = "200 fixtures, p agreement to 1e-12";
    return true;
}

// ---- criterion 4: CLI determinism --------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = buf.str();
    }
    return files;
}

std::uint64_t fnv1a(const std::string& data, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (const unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t metrics_digest(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().filename() == "metrics.csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        hash = fnv1a(fs::relative(path, root).string(), hash);
        hash = fnv1a(buf.str(), hash);
    }
    return hash;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string command =
        std::string(ROBOEVO_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    return std::system(command.c_str());
}

bool criterion_cli_determinism(std::string& detail) {
    const fs::path work = fs::temp_directory_path() / "roboevo_acceptance_cli";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string spec = std::string(ROBOEVO_SPEC_DIR) + "/experiment1_la.spec";

    const auto invoke = [&](const std::string& out, int workers) {
        return run_cli("evolve " + spec + " --smoke --seed 123 --workers " +
                           std::to_string(workers) + " --out " + (work / out).string(),
                       work / (out + ".log"));
    };
    if (invoke("a", 2) != 0 || invoke("b", 2) != 0) {
        detail = "cmd_evolve exited nonzero";
        return false;
    }
    if (read_tree(work / "a") != read_tree(work / "b")) {
        detail = "equal-seed archives differ";
        return false;
    }
    if (invoke("w1", 1) != 0 || invoke("w8", 8) != 0) {
        detail = "worker-count invocations exited nonzero";
        return false;
    }
    const std::uint64_t digest1 = metrics_digest(work / "w1");
    const std::uint64_t digest8 = metrics_digest(work / "w8");
    if (digest1 != digest8) {
        detail = "metrics digests differ across worker counts";
        return false;
    }
    fs::remove_all(work);
    detail = "byte-identical archives; digests equal across workers";
    return true;
}

// ---- criterion 5: CPG and physics sanity --------------------------------

bool criterion_physics(std::string& detail) {
    // Oscillator period via positive-going zero crossings of x over 30 s.
    {
        BrainSpec spec;
        spec.joint_modules = {1};
        spec.joint_kinds = {ModuleKind::HingeHorizontal};
        CpgNetwork network(spec, CpgConfig{});
        const double dt = 0.005;
        double previous = network.state_x(0);
        std::vector<double> crossings;
        for (int i = 1; i <= 6000; ++i) {
            network.step(dt);
            const double current = network.state_x(0);
            if (previous < 0.0 && current >= 0.0) {
                const double frac = -previous / (current - previous);
                crossings.push_back((i - 1 + frac) * dt);
            }
            previous = current;
        }
        if (crossings.size() < 2) {
            detail = "no oscillation detected";
            return false;
        }
        const double period =
            (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
        const double period_error = std::abs(period - 1.0);
        if (period_error >= 0.01) {
            detail = "period error " + std::to_string(period_error);
            return false;
        }
    }

    // Core-only settling drift.
    {
        const BodyGraph body = fixtures::core_only();
        const BrainSpec brain =
            decode_brain(fixtures::constant_brain_genome(Activation::Sigmoid), body, DecodeLimits{});
        const Trajectory trajectory = simulate(body, brain, Heightmap::plain(20.0), SimConfig{});
        const double drift = std::hypot(trajectory.samples.back().x - trajectory.samples.front().x,
                                        trajectory.samples.back().y - trajectory.samples.front().y);
        if (trajectory.unstable || drift >= 1e-3) {
            detail = "core-only drift " + std::to_string(drift);
            return false;
        }
    }

    // Monotone kinetic-energy decay with gain 0.
    {
        const BodyGraph body = fixtures::hinge_walker();
        const BrainSpec brain =
            decode_brain(fixtures::constant_brain_genome(Activation::Sigmoid), body, DecodeLimits{});
        SimConfig config;
        config.record_energy = true;
        CpgConfig controller;
        controller.gain = 0.0;
        const Trajectory trajectory =
            simulate(body, brain, Heightmap::plain(20.0), config, controller);
        if (trajectory.unstable) {
            detail = "gain-0 run unstable";
            return false;
        }
        for (std::size_t i = 1; i < trajectory.kinetic_energy.size(); ++i) {
            if (trajectory.kinetic_energy[i] > trajectory.kinetic_energy[i - 1] + 1e-8) {
                detail = "kinetic energy rose at step " + std::to_string(i);
                return false;
            }
        }
    }
    detail = "period, settling, and energy decay within tolerance";
    return true;
}

// ---- criteria 6 & 7: desk-scale evolution -------------------------------

EvolutionConfig desk_scale(bool rough) {
    EvolutionConfig config;
    config.mu = 20;
    config.lambda = 10;
    config.generations = 30;
    config.seed = 1000;
    if (rough) {
        config.environment.type = EnvironmentConfig::Type::Rough;
    }
    config.linear_actuator_enabled = false;
    return config;
}

double generation_mean_fitness(const GenerationRecord& generation) {
    double sum = 0.0;
    for (const auto& record : generation.population) {
        sum += record.fitness;
    }
    return sum / static_cast<double>(generation.population.size());
}

bool criterion_smoke_trend(std::string& detail) {
    EvolveOptions options;
    options.workers = 4;
    const auto archives = run_experiment(desk_scale(false), 5, options);
    int improved = 0;
    std::string means;
    for (const auto& archive : archives) {
        const double first = generation_mean_fitness(archive.generations.front());
        const double last = generation_mean_fitness(archive.generations.back());
        improved += last >= first ? 1 : 0;
        means += " " + std::to_string(first) + "->" + std::to_string(last);
    }
    detail = std::to_string(improved) + "/5 runs improved:" + means;
    return improved >= 4;
}

bool criterion_experiment2(std::string& detail) {
    EvolveOptions options;
    options.workers = 4;
    EvolutionConfig plain_config = desk_scale(false);
    EvolutionConfig rough_config = desk_scale(true);
    rough_config.seed = 2000;
    const auto plain_arm = run_experiment(plain_config, 5, options);
    const auto rough_arm = run_experiment(rough_config, 5, options);

    const auto rows = compare_final_generation(plain_arm, rough_arm);
    if (rows.size() != 9) {
        detail = "report has " + std::to_string(rows.size()) + " rows, expected 9";
        return false;
    }
    for (const auto& row : rows) {
        if (!(row.p_value >= 0.0 && row.p_value <= 1.0)) {
            detail = "bad p-value in row " + row.metric;
            return false;
        }
    }

    // Pipeline validity on synthetic shifted arms, 20 runs each.
    Rng rng(31337);
    std::vector<RunArchive> arm_a;
    std::vector<RunArchive> arm_b;
    for (int run = 0; run < 20; ++run) {
        RunArchive a;
        RunArchive b;
        GenerationRecord gen_a;
        GenerationRecord gen_b;
        for (int i = 0; i < 10; ++i) {
            IndividualRecord record;
            record.id = static_cast<std::uint64_t>(i);
            record.fitness = rng.uniform01();
            record.descriptors.branching = 0.2 + rng.normal(0.0, 0.002);
            record.descriptors.coverage = 0.5;
            record.descriptors.proportion = 0.5;
            record.descriptors.symmetry = 0.5;
            record.descriptors.absolute_size = 5;
            gen_a.population.push_back(record);
            record.descriptors.branching += 0.4;  // 10+ sigma shift
            gen_b.population.push_back(record);
        }
        a.generations.push_back(gen_a);
        b.generations.push_back(gen_b);
        arm_a.push_back(a);
        arm_b.push_back(b);
    }
    const auto synthetic_rows = compare_final_generation(arm_a, arm_b);
    int flagged = 0;
    for (const auto& row : synthetic_rows) {
        flagged += row.significant ? 1 : 0;
    }
    if (flagged < 1) {
        detail = "synthetic shifted arm not flagged";
        return false;
    }
    detail = "9-row report complete; " + std::to_string(flagged) + " synthetic descriptor(s) flagged";
    return true;
}

// ---- criterion 8: NEAT operator invariants ------------------------------

bool criterion_neat(std::string& detail) {
    Rng rng(90210);
    InnovationRegistry registry(minimal_reserved_nodes(3, 6), minimal_reserved_innovations(3, 6));
    MutationParams params;
    params.p_add_connection = 0.15;
    params.p_add_node = 0.1;

    std::vector<Cppn> population;
    for (int i = 0; i < 10; ++i) {
        population.push_back(minimal_cppn(3, 6, params.weight_range, rng));
    }
    long applications = 0;
    while (applications < 10000) {
        registry.begin_epoch();
        for (auto& genome : population) {
            const std::size_t other = rng.uniform_index(population.size());
            const Cppn child = mutate(
                crossover(genome, population[other], rng.uniform01(), rng.uniform01(), rng), params,
                registry, rng);
            applications += 2;  // one crossover + one mutation
            if (!is_acyclic(child)) {
                detail = "cycle after " + std::to_string(applications) + " applications";
                return false;
            }
            std::set<std::uint64_t> innovations;
            for (const auto& c : child.connections) {
                if (!innovations.insert(c.innovation).second) {
                    detail = "duplicate innovation after " + std::to_string(applications);
                    return false;
                }
            }
            genome = child;
        }
    }

    // Crossover of identical parents is the identity.
    Rng check_rng(5);
    for (const auto& genome : population) {
        if (!genomes_equal(crossover(genome, genome, 1.0, 1.0, check_rng), genome)) {
            detail = "identical-parent crossover changed the genome";
            return false;
        }
    }

    // Same-generation identical structural mutations share innovation ids.
    registry.begin_epoch();
    MutationParams split_only{0, 0, 0, 1.0, 0.5, 3.0};
    Rng rng_a(1);
    Rng rng_b(2);
    Cppn base = minimal_cppn(1, 1, 3.0, rng);
    const Cppn a = mutate(base, split_only, registry, rng_a);
    const Cppn b = mutate(base, split_only, registry, rng_b);
    if (a.connections.size() != 3 || b.connections.size() != 3 ||
        a.connections[1].innovation != b.connections[1].innovation ||
        a.connections[2].innovation != b.connections[2].innovation ||
        a.nodes.back().id != b.nodes.back().id) {
        detail = "identical splits disagreed on ids";
        return false;
    }
    detail = std::to_string(applications) + " operator applications clean";
    return true;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "fitness oracle suite", 1.0, criterion_fitness);
    run_criterion(2, "descriptor golden suite", 10.0, criterion_descriptors);
    run_criterion(3, "Wilcoxon exactness", 30.0, criterion_wilcoxon);
    run_criterion(4, "CLI determinism", 300.0, criterion_cli_determinism);
    run_criterion(5, "CPG physics sanity", 0.0, criterion_physics);
    run_criterion(6, "evolution smoke trend", 900.0, criterion_smoke_trend);
    run_criterion(7, "plain vs rough comparison pipeline", 0.0, criterion_experiment2);
    run_criterion(8, "NEAT operator invariants", 0.0, criterion_neat);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
