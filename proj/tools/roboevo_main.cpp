#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "roboevo/analysis.hpp"
#include "roboevo/descriptors.hpp"
#include "roboevo/experiment.hpp"

namespace fs = std::filesystem;
using namespace roboevo;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
}

struct EvolveArgs {
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    bool resume = false;
    bool smoke = false;
};

int cmd_evolve(const EvolveArgs& args) {
    ExperimentSpec spec = load_experiment_spec(args.spec_path);
    if (args.smoke) {
        apply_smoke_overrides(spec.config);
    }
    if (args.seed_set) {
        spec.config.seed = args.seed;
    }
    const std::string out_dir = args.out_dir.empty() ? "runs/" + spec.name : args.out_dir;

    std::printf("experiment %s: %d runs, %d generations, mu=%d lambda=%d -> %s\n",
                spec.name.c_str(), spec.config.runs, spec.config.generations, spec.config.mu,
                spec.config.lambda, out_dir.c_str());

    EvolveOptions options;
    options.out_dir = out_dir;
    options.workers = args.workers;
    options.resume = args.resume;
    run_experiment(spec.config, spec.config.runs, options,
                   [](int run, int generation, double best, double mean) {
                       std::printf("run %d gen %d  best %.6f  mean %.6f\n", run, generation, best,
                                   mean);
                       std::fflush(stdout);
                   });
    std::printf("done: %d runs in %s\n", spec.config.runs, out_dir.c_str());
    return 0;
}

struct EvaluateArgs {
    std::string body_path;
    std::string brain_path;
    std::string env = "plain";
    double extent = 20.0;
    double amplitude = 0.08;
    double wavelength = 0.8;
    std::uint64_t seed = 42;
    double duration = 30.0;
};

int cmd_evaluate(const EvaluateArgs& args) {
    const BodyGraph body = deserialize(read_file(args.body_path));
    const ValidationReport report = validate(body);
    if (!report.ok) {
        std::string message = "invalid body " + args.body_path + ":";
        for (const auto& violation : report.violations) {
            message += "\n  " + violation;
        }
        throw std::runtime_error(message);
    }
    const Cppn brain = deserialize_genome(read_file(args.brain_path));

    EvolutionConfig config;
    config.simulation.duration = args.duration;
    config.environment.extent = args.extent;
    config.environment.amplitude = args.amplitude;
    config.environment.wavelength = args.wavelength;
    config.environment.seed = args.seed;
    if (args.env == "plain") {
        config.environment.type = EnvironmentConfig::Type::Plain;
    } else if (args.env == "rough") {
        config.environment.type = EnvironmentConfig::Type::Rough;
    } else {
        throw std::runtime_error("unknown environment \"" + args.env +
                                 "\" (expected plain or rough)");
    }

    const Heightmap terrain = make_terrain(config.environment);
    const EvaluationResult result = evaluate_robot(body, brain, terrain, config);

    if (result.trajectory.unstable) {
        std::printf("unstable: %s\n", result.trajectory.diagnostic.c_str());
    }
    std::printf("fitness,%.17g\n", result.fitness);
    std::printf("dist_projection,%.17g\n", result.breakdown.dist_projection);
    std::printf("length_traj,%.17g\n", result.breakdown.length_traj);
    std::printf("delta,%.17g\n", result.breakdown.delta);
    std::printf("penalty,%.17g\n", result.breakdown.penalty);
    std::printf("%s", trajectory_csv(result.trajectory).c_str());
    return 0;
}

int cmd_descriptors(const std::string& body_path, bool as_json) {
    const BodyGraph body = deserialize(read_file(body_path));
    const ValidationReport report = validate(body);
    if (!report.ok) {
        std::string message = "invalid body " + body_path + ":";
        for (const auto& violation : report.violations) {
            message += "\n  " + violation;
        }
        throw std::runtime_error(message);
    }
    const DescriptorVector d = descriptor_vector(body);
    const auto values = d.as_array();
    if (as_json) {
        std::printf("{");
        for (std::size_t i = 0; i < descriptor_names().size(); ++i) {
            std::printf("%s\"%s\": %.17g", i == 0 ? "" : ", ", descriptor_names()[i].c_str(),
                        values[i]);
        }
        std::printf("}\n");
    } else {
        for (std::size_t i = 0; i < descriptor_names().size(); ++i) {
            std::printf("%s%s", i == 0 ? "" : ",", descriptor_names()[i].c_str());
        }
        std::printf("\n");
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::printf("%s%.17g", i == 0 ? "" : ",", values[i]);
        }
        std::printf("\n");
    }
    return 0;
}

struct AnalyzeArgs {
    std::string arm_a;
    std::string arm_b;
    std::string out_dir;
    bool unpaired = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
    const std::vector<RunArchive> arm_a = load_arm(args.arm_a);
    const std::vector<RunArchive> arm_b = load_arm(args.arm_b);
    const std::string label_a = fs::path(args.arm_a).filename().string();
    const std::string label_b = fs::path(args.arm_b).filename().string();

    const auto rows = compare_final_generation(arm_a, arm_b, args.unpaired);
    std::printf("%s", comparison_report_text(rows, label_a, label_b).c_str());

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        const fs::path out(args.out_dir);
        write_file((out / "comparison.csv").string(), comparison_report_csv(rows));
        write_file((out / "final_generation_values.csv").string(),
                   final_generation_values_csv(arm_a, arm_b, label_a, label_b));
        for (const auto& metric : metric_names()) {
            write_file((out / ("progression_" + metric + "_" + label_a + ".csv")).string(),
                       progression_csv(progression_series(arm_a, metric)));
            write_file((out / ("progression_" + metric + "_" + label_b + ".csv")).string(),
                       progression_csv(progression_series(arm_b, metric)));
        }
        std::printf("\nplot data written to %s\n", args.out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modular robot evolution: evolve bodies and CPG controllers for directed "
                 "locomotion, quantify morphologies, compare experiment arms"};
    app.require_subcommand(1);

    EvolveArgs evolve_args;
    auto* evolve_cmd = app.add_subcommand("evolve", "run an experiment from a spec file");
    evolve_cmd->add_option("spec", evolve_args.spec_path, "experiment spec (JSON)")->required();
    evolve_cmd->add_option("--out", evolve_args.out_dir, "output directory (default runs/<name>)");
    auto* seed_opt = evolve_cmd->add_option("--seed", evolve_args.seed, "override the base seed");
    evolve_cmd->add_option("--workers", evolve_args.workers, "parallel evaluation workers")
        ->default_val(1);
    evolve_cmd->add_flag("--resume", evolve_args.resume, "continue from existing checkpoints");
    evolve_cmd->add_flag("--smoke", evolve_args.smoke,
                         "desk-scale overrides (mu=8 lambda=4 generations=5 runs=2)");

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "simulate one robot and print its fitness breakdown");
    evaluate_cmd->add_option("body", evaluate_args.body_path, "body document")->required();
    evaluate_cmd->add_option("brain", evaluate_args.brain_path, "brain genome document")->required();
    evaluate_cmd->add_option("--env", evaluate_args.env, "plain or rough")->default_val("plain");
    evaluate_cmd->add_option("--extent", evaluate_args.extent, "terrain extent (m)");
    evaluate_cmd->add_option("--amplitude", evaluate_args.amplitude, "rough amplitude (m)");
    evaluate_cmd->add_option("--wavelength", evaluate_args.wavelength, "rough wavelength (m)");
    evaluate_cmd->add_option("--seed", evaluate_args.seed, "terrain seed");
    evaluate_cmd->add_option("--duration", evaluate_args.duration, "evaluation window (s)");

    std::string descriptors_body;
    bool descriptors_json = false;
    auto* descriptors_cmd =
        app.add_subcommand("descriptors", "print the morphological descriptor vector of a body");
    descriptors_cmd->add_option("body", descriptors_body, "body document")->required();
    descriptors_cmd->add_flag("--json", descriptors_json, "JSON instead of CSV");

    AnalyzeArgs analyze_args;
    auto* analyze_cmd =
        app.add_subcommand("analyze", "compare the final generations of two experiment arms");
    analyze_cmd->add_option("arm_a", analyze_args.arm_a, "first arm directory (contains run_*)")
        ->required();
    analyze_cmd->add_option("arm_b", analyze_args.arm_b, "second arm directory")->required();
    analyze_cmd->add_option("--out", analyze_args.out_dir, "directory for plot-data CSVs");
    analyze_cmd->add_flag("--unpaired", analyze_args.unpaired,
                          "rank-sum instead of the paired signed-rank test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints message or help
        return code == 0 ? 0 : 1;      // any parse failure is a user error
    }

    try {
        if (evolve_cmd->parsed()) {
            evolve_args.seed_set = seed_opt->count() > 0;
            return cmd_evolve(evolve_args);
        }
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(evaluate_args);
        }
        if (descriptors_cmd->parsed()) {
            return cmd_descriptors(descriptors_body, descriptors_json);
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(analyze_args);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (...) {
        std::fprintf(stderr, "internal error\n");
        return 2;
    }
    return 0;
}
