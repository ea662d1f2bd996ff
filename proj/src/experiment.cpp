#include "roboevo/experiment.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace roboevo {

using nlohmann::json;

namespace {

// Rejects keys outside the allowed set, naming the field.
void check_fields(const json& j, const std::string& context,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* name : allowed) {
            ok = ok || key == name;
        }
        if (!ok) {
            throw std::runtime_error("invalid spec field \"" + key + "\" in " + context);
        }
    }
}

void read_environment(const json& j, EnvironmentConfig& environment) {
    check_fields(j, "environment", {"type", "extent", "cell_size", "amplitude", "wavelength", "seed"});
    if (j.contains("type")) {
        const auto type = j.at("type").get<std::string>();
        if (type == "plain") {
            environment.type = EnvironmentConfig::Type::Plain;
        } else if (type == "rough") {
            environment.type = EnvironmentConfig::Type::Rough;
        } else {
            throw std::runtime_error("invalid spec field \"type\" in environment: \"" + type +
                                     "\" (expected plain or rough)");
        }
    }
    environment.extent = j.value("extent", environment.extent);
    environment.cell_size = j.value("cell_size", environment.cell_size);
    environment.amplitude = j.value("amplitude", environment.amplitude);
    environment.wavelength = j.value("wavelength", environment.wavelength);
    environment.seed = j.value("seed", environment.seed);
}

void read_evolution(const json& j, EvolutionConfig& config) {
    check_fields(j, "evolution",
                 {"mu", "lambda", "generations", "runs", "tournament_size", "seed"});
    config.mu = j.value("mu", config.mu);
    config.lambda = j.value("lambda", config.lambda);
    config.generations = j.value("generations", config.generations);
    config.runs = j.value("runs", config.runs);
    config.tournament_size = j.value("tournament_size", config.tournament_size);
    config.seed = j.value("seed", config.seed);
}

void read_simulation(const json& j, SimConfig& simulation) {
    check_fields(j, "simulation",
                 {"dt", "duration", "settle_duration", "sample_period", "gravity",
                  "contact_stiffness", "contact_damping", "friction", "friction_v_eps",
                  "joint_tracking_rate", "module_size", "module_mass", "actuator_stroke",
                  "servo_range", "max_speed"});
    simulation.dt = j.value("dt", simulation.dt);
    simulation.duration = j.value("duration", simulation.duration);
    simulation.settle_duration = j.value("settle_duration", simulation.settle_duration);
    simulation.sample_period = j.value("sample_period", simulation.sample_period);
    simulation.gravity = j.value("gravity", simulation.gravity);
    simulation.contact_stiffness = j.value("contact_stiffness", simulation.contact_stiffness);
    simulation.contact_damping = j.value("contact_damping", simulation.contact_damping);
    simulation.friction = j.value("friction", simulation.friction);
    simulation.friction_v_eps = j.value("friction_v_eps", simulation.friction_v_eps);
    simulation.joint_tracking_rate = j.value("joint_tracking_rate", simulation.joint_tracking_rate);
    simulation.module_size = j.value("module_size", simulation.module_size);
    simulation.module_mass = j.value("module_mass", simulation.module_mass);
    simulation.actuator_stroke = j.value("actuator_stroke", simulation.actuator_stroke);
    simulation.servo_range = j.value("servo_range", simulation.servo_range);
    simulation.max_speed = j.value("max_speed", simulation.max_speed);
}

void read_controller(const json& j, CpgConfig& controller) {
    check_fields(j, "controller", {"omega", "gain", "state_clamp"});
    controller.omega = j.value("omega", controller.omega);
    controller.gain = j.value("gain", controller.gain);
    controller.state_clamp = j.value("state_clamp", controller.state_clamp);
}

void read_fitness(const json& j, FitnessParams& fitness) {
    check_fields(j, "fitness", {"beta0", "epsilon", "penalty_coefficient"});
    fitness.beta0 = j.value("beta0", fitness.beta0);
    fitness.epsilon = j.value("epsilon", fitness.epsilon);
    fitness.penalty_coefficient = j.value("penalty_coefficient", fitness.penalty_coefficient);
}

void read_mutation(const json& j, MutationParams& mutation) {
    check_fields(j, "mutation",
                 {"p_weight_perturb", "p_weight_reset", "p_add_connection", "p_add_node",
                  "weight_perturb_sigma", "weight_range"});
    mutation.p_weight_perturb = j.value("p_weight_perturb", mutation.p_weight_perturb);
    mutation.p_weight_reset = j.value("p_weight_reset", mutation.p_weight_reset);
    mutation.p_add_connection = j.value("p_add_connection", mutation.p_add_connection);
    mutation.p_add_node = j.value("p_add_node", mutation.p_add_node);
    mutation.weight_perturb_sigma = j.value("weight_perturb_sigma", mutation.weight_perturb_sigma);
    mutation.weight_range = j.value("weight_range", mutation.weight_range);
}

void read_decode(const json& j, DecodeLimits& decode) {
    check_fields(j, "decode", {"max_modules", "grid_radius", "cpg_neighborhood", "weight_clamp"});
    decode.max_modules = j.value("max_modules", decode.max_modules);
    decode.grid_radius = j.value("grid_radius", decode.grid_radius);
    decode.cpg_neighborhood = j.value("cpg_neighborhood", decode.cpg_neighborhood);
    decode.weight_clamp = j.value("weight_clamp", decode.weight_clamp);
}

bool filesystem_safe(const std::string& name) {
    if (name.empty()) {
        return false;
    }
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("spec parse error: ") + e.what());
    }
    check_fields(doc, "spec",
                 {"format_version", "name", "environment", "linear_actuator_enabled", "evolution",
                  "simulation", "controller", "fitness", "mutation", "decode"});
    if (doc.value("format_version", 0) != 1) {
        throw std::runtime_error("spec error: missing or unsupported format_version");
    }
    ExperimentSpec spec;
    if (!doc.contains("name")) {
        throw std::runtime_error("spec error: missing field \"name\"");
    }
    spec.name = doc.at("name").get<std::string>();
    if (!filesystem_safe(spec.name)) {
        throw std::runtime_error("spec error: name \"" + spec.name +
                                 "\" is not filesystem-safe ([A-Za-z0-9_-]+)");
    }
    spec.config.linear_actuator_enabled =
        doc.value("linear_actuator_enabled", spec.config.linear_actuator_enabled);
    if (doc.contains("environment")) {
        read_environment(doc.at("environment"), spec.config.environment);
    }
    if (doc.contains("evolution")) {
        read_evolution(doc.at("evolution"), spec.config);
    }
    if (doc.contains("simulation")) {
        read_simulation(doc.at("simulation"), spec.config.simulation);
    }
    if (doc.contains("controller")) {
        read_controller(doc.at("controller"), spec.config.controller);
    }
    if (doc.contains("fitness")) {
        read_fitness(doc.at("fitness"), spec.config.fitness);
    }
    if (doc.contains("mutation")) {
        read_mutation(doc.at("mutation"), spec.config.mutation);
    }
    if (doc.contains("decode")) {
        read_decode(doc.at("decode"), spec.config.decode);
    }
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read spec file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_spec(buf.str());
}

std::string evolution_config_json(const EvolutionConfig& config) {
    json doc;
    doc["format_version"] = 1;
    doc["mu"] = config.mu;
    doc["lambda"] = config.lambda;
    doc["generations"] = config.generations;
    doc["runs"] = config.runs;
    doc["tournament_size"] = config.tournament_size;
    doc["seed"] = config.seed;
    doc["linear_actuator_enabled"] = config.linear_actuator_enabled;
    doc["environment"] = {
        {"type", config.environment.type == EnvironmentConfig::Type::Plain ? "plain" : "rough"},
        {"extent", config.environment.extent},
        {"cell_size", config.environment.cell_size},
        {"amplitude", config.environment.amplitude},
        {"wavelength", config.environment.wavelength},
        {"seed", config.environment.seed}};
    doc["simulation"] = {{"dt", config.simulation.dt},
                         {"duration", config.simulation.duration},
                         {"settle_duration", config.simulation.settle_duration},
                         {"sample_period", config.simulation.sample_period},
                         {"gravity", config.simulation.gravity},
                         {"contact_stiffness", config.simulation.contact_stiffness},
                         {"contact_damping", config.simulation.contact_damping},
                         {"friction", config.simulation.friction},
                         {"friction_v_eps", config.simulation.friction_v_eps},
                         {"joint_tracking_rate", config.simulation.joint_tracking_rate},
                         {"module_size", config.simulation.module_size},
                         {"module_mass", config.simulation.module_mass},
                         {"actuator_stroke", config.simulation.actuator_stroke},
                         {"servo_range", config.simulation.servo_range},
                         {"max_speed", config.simulation.max_speed}};
    doc["controller"] = {{"omega", config.controller.omega},
                         {"gain", config.controller.gain},
                         {"state_clamp", config.controller.state_clamp}};
    doc["fitness"] = {{"beta0", config.fitness.beta0},
                      {"epsilon", config.fitness.epsilon},
                      {"penalty_coefficient", config.fitness.penalty_coefficient}};
    doc["mutation"] = {{"p_weight_perturb", config.mutation.p_weight_perturb},
                       {"p_weight_reset", config.mutation.p_weight_reset},
                       {"p_add_connection", config.mutation.p_add_connection},
                       {"p_add_node", config.mutation.p_add_node},
                       {"weight_perturb_sigma", config.mutation.weight_perturb_sigma},
                       {"weight_range", config.mutation.weight_range}};
    doc["decode"] = {{"max_modules", config.decode.max_modules},
                     {"grid_radius", config.decode.grid_radius},
                     {"cpg_neighborhood", config.decode.cpg_neighborhood},
                     {"weight_clamp", config.decode.weight_clamp}};
    return doc.dump(2) + "\n";
}

void apply_smoke_overrides(EvolutionConfig& config) {
    config.mu = 8;
    config.lambda = 4;
    config.generations = 5;
    config.runs = 2;
}

}  // namespace roboevo
