#include "roboevo/genome.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace roboevo {

using nlohmann::json;

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Sine: return "sine";
        case Activation::Gaussian: return "gaussian";
        case Activation::Tanh: return "tanh";
    }
    return "?";
}

bool activation_from_name(const std::string& name, Activation& out) {
    for (int i = 0; i < 5; ++i) {
        const auto a = static_cast<Activation>(i);
        if (name == activation_name(a)) {
            out = a;
            return true;
        }
    }
    return false;
}

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::Sine: return std::sin(x);
        case Activation::Gaussian: return std::exp(-x * x);
        case Activation::Tanh: return std::tanh(x);
    }
    return x;
}

const NodeGene* Cppn::find_node(int node_id) const {
    for (const auto& n : nodes) {
        if (n.id == node_id) {
            return &n;
        }
    }
    return nullptr;
}

bool Cppn::has_connection(int from, int to) const {
    for (const auto& c : connections) {
        if (c.from == from && c.to == to) {
            return true;
        }
    }
    return false;
}

std::vector<double> evaluate(const Cppn& cppn, const std::vector<double>& inputs) {
    if (static_cast<int>(inputs.size()) != cppn.input_count) {
        throw std::invalid_argument("evaluate: expected " + std::to_string(cppn.input_count) +
                                    " inputs, got " + std::to_string(inputs.size()));
    }

    // Kahn's algorithm over enabled connections; ties broken by node id so the
    // order, and therefore the floating-point result, is deterministic.
    std::map<int, int> indegree;
    for (const auto& n : cppn.nodes) {
        indegree[n.id] = 0;
    }
    for (const auto& c : cppn.connections) {
        if (c.enabled) {
            ++indegree[c.to];
        }
    }
    std::set<int> ready;
    for (const auto& [id, deg] : indegree) {
        if (deg == 0) {
            ready.insert(id);
        }
    }

    std::map<int, double> incoming;  // accumulated weighted sum per node
    std::map<int, double> value;
    for (const auto& n : cppn.nodes) {
        incoming[n.id] = 0.0;
    }

    while (!ready.empty()) {
        const int id = *ready.begin();
        ready.erase(ready.begin());
        double v;
        if (cppn.is_input(id)) {
            v = inputs[static_cast<std::size_t>(id)];
        } else {
            const NodeGene* node = cppn.find_node(id);
            v = apply_activation(node->activation, incoming[id]);
        }
        value[id] = v;
        for (const auto& c : cppn.connections) {
            if (c.enabled && c.from == id) {
                incoming[c.to] += c.weight * v;
                if (--indegree[c.to] == 0) {
                    ready.insert(c.to);
                }
            }
        }
    }

    std::vector<double> outputs(static_cast<std::size_t>(cppn.output_count), 0.0);
    for (int i = 0; i < cppn.output_count; ++i) {
        const int id = cppn.input_count + i;
        const auto it = value.find(id);
        if (it != value.end()) {
            outputs[static_cast<std::size_t>(i)] = it->second;
        } else {
            // Unreached (would mean a cycle upstream); default to activation(0).
            const NodeGene* node = cppn.find_node(id);
            outputs[static_cast<std::size_t>(i)] =
                node ? apply_activation(node->activation, 0.0) : 0.0;
        }
    }
    return outputs;
}

// Reachability over the given edge set: can `from` be reached starting at `to`?
static bool reaches(const std::vector<ConnectionGene>& edges, int start, int target) {
    std::vector<int> stack{start};
    std::set<int> seen{start};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id == target) {
            return true;
        }
        for (const auto& c : edges) {
            if (c.from == id && seen.insert(c.to).second) {
                stack.push_back(c.to);
            }
        }
    }
    return false;
}

bool is_acyclic(const Cppn& cppn) {
    for (const auto& c : cppn.connections) {
        std::vector<ConnectionGene> others;
        for (const auto& o : cppn.connections) {
            if (o.innovation != c.innovation) {
                others.push_back(o);
            }
        }
        if (c.from == c.to || reaches(others, c.to, c.from)) {
            return false;
        }
    }
    return true;
}

void InnovationRegistry::begin_epoch() {
    epoch_connections_.clear();
    epoch_splits_.clear();
}

std::uint64_t InnovationRegistry::connection_innovation(int from, int to) {
    const auto key = std::make_pair(from, to);
    const auto it = epoch_connections_.find(key);
    if (it != epoch_connections_.end()) {
        return it->second;
    }
    const std::uint64_t innov = next_innovation_++;
    epoch_connections_.emplace(key, innov);
    return innov;
}

InnovationRegistry::NodeSplit InnovationRegistry::node_split(std::uint64_t split_innovation,
                                                             Rng& rng) {
    const auto it = epoch_splits_.find(split_innovation);
    if (it != epoch_splits_.end()) {
        return it->second;
    }
    NodeSplit split;
    split.node_id = next_node_id_++;
    // Hidden nodes draw from the full activation palette.
    split.activation = static_cast<Activation>(rng.uniform_index(5));
    split.in_innovation = next_innovation_++;
    split.out_innovation = next_innovation_++;
    epoch_splits_.emplace(split_innovation, split);
    return split;
}

void InnovationRegistry::restore(int next_node_id, std::uint64_t next_innovation) {
    next_node_id_ = next_node_id;
    next_innovation_ = next_innovation;
    begin_epoch();
}

static void insert_connection_sorted(Cppn& cppn, const ConnectionGene& gene) {
    const auto pos = std::lower_bound(
        cppn.connections.begin(), cppn.connections.end(), gene,
        [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
    cppn.connections.insert(pos, gene);
}

static void insert_node_sorted(Cppn& cppn, const NodeGene& gene) {
    const auto pos =
        std::lower_bound(cppn.nodes.begin(), cppn.nodes.end(), gene,
                         [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    cppn.nodes.insert(pos, gene);
}

static double clamp_weight(double w, double range) {
    return std::min(range, std::max(-range, w));
}

Cppn mutate(const Cppn& cppn, const MutationParams& params, InnovationRegistry& registry, Rng& rng,
            MutationReport* report) {
    Cppn out = cppn;
    MutationReport local;

    for (auto& c : out.connections) {
        const double r = rng.uniform01();
        if (r < params.p_weight_perturb) {
            c.weight = clamp_weight(c.weight + rng.normal(0.0, params.weight_perturb_sigma),
                                    params.weight_range);
        } else if (r < params.p_weight_perturb + params.p_weight_reset) {
            c.weight = rng.uniform(-params.weight_range, params.weight_range);
        }
    }

    const double s = rng.uniform01();
    if (s < params.p_add_node) {
        std::vector<std::size_t> enabled;
        for (std::size_t i = 0; i < out.connections.size(); ++i) {
            if (out.connections[i].enabled) {
                enabled.push_back(i);
            }
        }
        if (!enabled.empty()) {
            const std::size_t pick = enabled[rng.uniform_index(enabled.size())];
            out.connections[pick].enabled = false;
            const ConnectionGene split = out.connections[pick];  // copy: inserts reallocate
            const auto info = registry.node_split(split.innovation, rng);
            insert_node_sorted(out, NodeGene{info.node_id, info.activation});
            insert_connection_sorted(out, ConnectionGene{info.in_innovation, split.from,
                                                         info.node_id, 1.0, true});
            insert_connection_sorted(out, ConnectionGene{info.out_innovation, info.node_id,
                                                         split.to, split.weight, true});
            local.added_node = true;
        }
    } else if (s < params.p_add_node + params.p_add_connection) {
        // Candidate endpoints: from anything but an output, to anything but an
        // input. One uniform draw; a bad draw skips the mutation.
        std::vector<int> from_ids;
        std::vector<int> to_ids;
        for (const auto& n : out.nodes) {
            if (!out.is_output(n.id)) {
                from_ids.push_back(n.id);
            }
            if (!out.is_input(n.id)) {
                to_ids.push_back(n.id);
            }
        }
        if (!from_ids.empty() && !to_ids.empty()) {
            const int from = from_ids[rng.uniform_index(from_ids.size())];
            const int to = to_ids[rng.uniform_index(to_ids.size())];
            if (from == to || out.has_connection(from, to)) {
                ++local.skipped_duplicate;
            } else if (reaches(out.connections, to, from)) {
                ++local.skipped_cycle;
            } else {
                const std::uint64_t innov = registry.connection_innovation(from, to);
                insert_connection_sorted(
                    out, ConnectionGene{innov, from, to,
                                        rng.uniform(-params.weight_range, params.weight_range), true});
                local.added_connection = true;
            }
        }
    }

    if (report != nullptr) {
        *report = local;
    }
    return out;
}

Cppn crossover(const Cppn& parent_a, const Cppn& parent_b, double fitness_a, double fitness_b,
               Rng& rng) {
    Cppn child;
    child.input_count = parent_a.input_count;
    child.output_count = parent_a.output_count;

    std::map<std::uint64_t, const ConnectionGene*> genes_a;
    std::map<std::uint64_t, const ConnectionGene*> genes_b;
    for (const auto& c : parent_a.connections) {
        genes_a.emplace(c.innovation, &c);
    }
    for (const auto& c : parent_b.connections) {
        genes_b.emplace(c.innovation, &c);
    }
    std::set<std::uint64_t> all_innovations;
    for (const auto& [innov, gene] : genes_a) {
        (void)gene;
        all_innovations.insert(innov);
    }
    for (const auto& [innov, gene] : genes_b) {
        (void)gene;
        all_innovations.insert(innov);
    }

    const bool tie = fitness_a == fitness_b;
    const bool a_fitter = fitness_a > fitness_b;

    std::set<std::pair<int, int>> taken_pairs;
    for (const std::uint64_t innov : all_innovations) {
        const auto ita = genes_a.find(innov);
        const auto itb = genes_b.find(innov);
        const ConnectionGene* gene = nullptr;
        if (ita != genes_a.end() && itb != genes_b.end()) {
            gene = rng.coin() ? ita->second : itb->second;
        } else if (ita != genes_a.end()) {
            if (a_fitter || (tie && rng.coin())) {
                gene = ita->second;
            }
        } else {
            if (!a_fitter && (!tie || rng.coin())) {
                gene = itb->second;
            }
        }
        if (gene == nullptr) {
            continue;
        }
        // Mixed inheritance can combine edges that individually came from
        // acyclic parents into a cycle or a duplicate pair; such genes are
        // dropped in innovation order.
        if (taken_pairs.count({gene->from, gene->to}) != 0) {
            continue;
        }
        if (reaches(child.connections, gene->to, gene->from)) {
            continue;
        }
        insert_connection_sorted(child, *gene);
        taken_pairs.insert({gene->from, gene->to});
    }

    // Node genes: the fixed inputs/outputs plus every hidden endpoint. A node
    // id is created by exactly one registered mutation event, so whichever
    // parent carries it has the same activation.
    std::set<int> needed;
    for (int i = 0; i < child.input_count + child.output_count; ++i) {
        needed.insert(i);
    }
    for (const auto& c : child.connections) {
        needed.insert(c.from);
        needed.insert(c.to);
    }
    for (const int id : needed) {
        const NodeGene* node = parent_a.find_node(id);
        if (node == nullptr) {
            node = parent_b.find_node(id);
        }
        if (node == nullptr) {
            throw std::runtime_error("crossover: node " + std::to_string(id) +
                                     " missing from both parents");
        }
        insert_node_sorted(child, *node);
    }
    return child;
}

Cppn minimal_cppn(int input_count, int output_count, double weight_range, Rng& rng) {
    Cppn cppn;
    cppn.input_count = input_count;
    cppn.output_count = output_count;
    for (int i = 0; i < input_count; ++i) {
        cppn.nodes.push_back({i, Activation::Identity});
    }
    for (int j = 0; j < output_count; ++j) {
        cppn.nodes.push_back({input_count + j, Activation::Tanh});
    }
    for (int i = 0; i < input_count; ++i) {
        for (int j = 0; j < output_count; ++j) {
            const std::uint64_t innov =
                static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(output_count) +
                static_cast<std::uint64_t>(j);
            cppn.connections.push_back(
                {innov, i, input_count + j, rng.uniform(-weight_range, weight_range), true});
        }
    }
    return cppn;
}

int minimal_reserved_nodes(int input_count, int output_count) {
    return input_count + output_count;
}

std::uint64_t minimal_reserved_innovations(int input_count, int output_count) {
    return static_cast<std::uint64_t>(input_count) * static_cast<std::uint64_t>(output_count);
}

std::string serialize_genome(const Cppn& cppn) {
    json doc;
    doc["format_version"] = 1;
    doc["input_count"] = cppn.input_count;
    doc["output_count"] = cppn.output_count;
    json nodes = json::array();
    for (const auto& n : cppn.nodes) {
        nodes.push_back({{"id", n.id}, {"activation", activation_name(n.activation)}});
    }
    doc["nodes"] = nodes;
    json connections = json::array();
    for (const auto& c : cppn.connections) {
        connections.push_back({{"innovation", c.innovation},
                               {"from", c.from},
                               {"to", c.to},
                               {"weight", c.weight},
                               {"enabled", c.enabled}});
    }
    doc["connections"] = connections;
    return doc.dump(2) + "\n";
}

Cppn deserialize_genome(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("parse error: ") + e.what());
    }
    if (doc.value("format_version", 0) != 1) {
        throw std::runtime_error("schema error: missing or unsupported format_version");
    }
    Cppn cppn;
    cppn.input_count = doc.at("input_count").get<int>();
    cppn.output_count = doc.at("output_count").get<int>();
    for (const auto& n : doc.at("nodes")) {
        NodeGene node;
        node.id = n.at("id").get<int>();
        const auto act_name = n.at("activation").get<std::string>();
        if (!activation_from_name(act_name, node.activation)) {
            throw std::runtime_error("schema error: unknown activation \"" + act_name + "\"");
        }
        cppn.nodes.push_back(node);
    }
    for (const auto& c : doc.at("connections")) {
        ConnectionGene gene;
        gene.innovation = c.at("innovation").get<std::uint64_t>();
        gene.from = c.at("from").get<int>();
        gene.to = c.at("to").get<int>();
        gene.weight = c.at("weight").get<double>();
        gene.enabled = c.at("enabled").get<bool>();
        cppn.connections.push_back(gene);
    }
    std::sort(cppn.nodes.begin(), cppn.nodes.end(),
              [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    std::sort(cppn.connections.begin(), cppn.connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) {
                  return a.innovation < b.innovation;
              });
    return cppn;
}

bool genomes_equal(const Cppn& a, const Cppn& b) {
    if (a.input_count != b.input_count || a.output_count != b.output_count ||
        a.nodes.size() != b.nodes.size() || a.connections.size() != b.connections.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (a.nodes[i].id != b.nodes[i].id || a.nodes[i].activation != b.nodes[i].activation) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.connections.size(); ++i) {
        const auto& ca = a.connections[i];
        const auto& cb = b.connections[i];
        if (ca.innovation != cb.innovation || ca.from != cb.from || ca.to != cb.to ||
            ca.weight != cb.weight || ca.enabled != cb.enabled) {
            return false;
        }
    }
    return true;
}

}  // namespace roboevo
