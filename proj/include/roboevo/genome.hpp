#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roboevo/rng.hpp"

namespace roboevo {

enum class Activation { Identity, Sigmoid, Sine, Gaussian, Tanh };

const char* activation_name(Activation a);
bool activation_from_name(const std::string& name, Activation& out);
double apply_activation(Activation a, double x);

struct NodeGene {
    int id = 0;
    Activation activation = Activation::Identity;
};

struct ConnectionGene {
    std::uint64_t innovation = 0;
    int from = 0;
    int to = 0;
    double weight = 0.0;
    bool enabled = true;
};

// Feed-forward CPPN genotype with NEAT historical markings.
//
// Node id convention: inputs are 0..input_count-1, outputs follow as
// input_count..input_count+output_count-1, hidden nodes carry ids handed out
// by the InnovationRegistry. Nodes are kept sorted by id and connections by
// innovation so that equal genomes serialize to equal bytes.
struct Cppn {
    int input_count = 0;
    int output_count = 0;
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;

    bool is_input(int node_id) const { return node_id < input_count; }
    bool is_output(int node_id) const {
        return node_id >= input_count && node_id < input_count + output_count;
    }
    const NodeGene* find_node(int node_id) const;
    bool has_connection(int from, int to) const;
};

// Deterministic topological-order evaluation over enabled connections.
// A node with no enabled inputs evaluates to activation(0), so evaluation is
// total. Throws std::invalid_argument on an input length mismatch.
std::vector<double> evaluate(const Cppn& cppn, const std::vector<double>& inputs);

// True when the connection graph (all connections, enabled or not) is acyclic.
bool is_acyclic(const Cppn& cppn);

// Shared per-run bookkeeping for historical markings. next ids only grow;
// the per-epoch tables make identical structural mutations within one
// generation receive identical innovation numbers (and, for node splits, the
// same node id and activation). begin_epoch() is called once per generation.
class InnovationRegistry {
public:
    InnovationRegistry(int reserved_nodes, std::uint64_t reserved_innovations)
        : next_node_id_(reserved_nodes), next_innovation_(reserved_innovations) {}

    void begin_epoch();

    std::uint64_t connection_innovation(int from, int to);

    struct NodeSplit {
        int node_id;
        Activation activation;
        std::uint64_t in_innovation;
        std::uint64_t out_innovation;
    };
    // Keyed by the innovation of the connection being split.
    NodeSplit node_split(std::uint64_t split_innovation, Rng& rng);

    int next_node_id() const { return next_node_id_; }
    std::uint64_t next_innovation() const { return next_innovation_; }
    void restore(int next_node_id, std::uint64_t next_innovation);

private:
    int next_node_id_;
    std::uint64_t next_innovation_;
    std::map<std::pair<int, int>, std::uint64_t> epoch_connections_;
    std::map<std::uint64_t, NodeSplit> epoch_splits_;
};

struct MutationParams {
    double p_weight_perturb = 0.8;
    double p_weight_reset = 0.1;
    double p_add_connection = 0.05;
    double p_add_node = 0.03;
    double weight_perturb_sigma = 0.5;
    double weight_range = 3.0;
};

struct MutationReport {
    bool added_node = false;
    bool added_connection = false;
    int skipped_cycle = 0;       // add-connection draws rejected for creating a cycle
    int skipped_duplicate = 0;   // add-connection draws that hit an existing pair
};

// Weight mutation per connection plus at most one structural mutation.
// Add-node splits a random enabled connection (old gene disabled, the two
// replacements and the node registered); add-connection draws one absent
// pair and is skipped, not retried, if it would create a cycle.
Cppn mutate(const Cppn& cppn, const MutationParams& params, InnovationRegistry& registry, Rng& rng,
            MutationReport* report = nullptr);

// NEAT crossover: matching innovations from a random parent, disjoint and
// excess genes from the fitter parent (on a fitness tie, a coin per gene).
// Genes whose inclusion would create a cycle or duplicate a connection pair
// are dropped, so the child is always a feed-forward genome.
Cppn crossover(const Cppn& parent_a, const Cppn& parent_b, double fitness_a, double fitness_b,
               Rng& rng);

// Fully connected input->output genome with uniform random weights in
// [-weight_range, weight_range]; connection (i,j) carries innovation
// i*output_count + j. Output nodes use tanh, inputs identity.
Cppn minimal_cppn(int input_count, int output_count, double weight_range, Rng& rng);

// Number of node ids / innovation ids the minimal genome occupies; registries
// must be constructed with these so fresh ids never collide.
int minimal_reserved_nodes(int input_count, int output_count);
std::uint64_t minimal_reserved_innovations(int input_count, int output_count);

// Canonical JSON genome document (same determinism contract as bodies).
std::string serialize_genome(const Cppn& cppn);
Cppn deserialize_genome(const std::string& document);

bool genomes_equal(const Cppn& a, const Cppn& b);

}  // namespace roboevo
