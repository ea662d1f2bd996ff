#pragma once

#include <optional>
#include <vector>

#include "roboevo/descriptors_types.hpp"
#include "roboevo/genome.hpp"
#include "roboevo/morphology.hpp"

namespace roboevo {

// Body genome: 3 inputs (normalized cell coordinates), 6 outputs (one score
// per module kind plus a brick-rotation score).
constexpr int kBodyInputs = 3;
constexpr int kBodyOutputs = kModuleKindCount + 1;

// Brain genome: two cell coordinates in, one coupling weight out.
constexpr int kBrainInputs = 6;
constexpr int kBrainOutputs = 1;

struct DecodeLimits {
    int max_modules = kMaxModules;
    int grid_radius = 10;            // cells; coordinates are normalized by this
    bool linear_actuator_enabled = true;
    int cpg_neighborhood = 2;        // max Manhattan distance for coupled oscillators
    double weight_clamp = 1.0;
};

// Grows a body breadth-first from the core. Frontier cells next to open slots
// are queried in placement order, then slot index; the winning kind is the
// argmax of the kind scores, with no growth when the best score is <= 0 or
// names the core (only one core exists). A brick takes rotation 90 when the
// rotation score is positive. Growth stops when the frontier empties or
// max_modules is reached. Total: the worst case is a core-only body.
BodyGraph decode_body(const Cppn& genome, const DecodeLimits& limits);

struct CpgEdge {
    int from = 0;  // oscillator indices in body traversal order
    int to = 0;
    double weight = 0.0;
};

struct BrainSpec {
    std::vector<int> joint_modules;       // indices into BodyGrid::modules
    std::vector<ModuleKind> joint_kinds;  // kind per oscillator
    std::vector<CpgEdge> edges;
};

// One oscillator per active joint, at the joint's grid cell. Every ordered
// pair of oscillators within the Manhattan neighborhood, plus each self pair,
// gets a weight from the genome, clamped to +-weight_clamp.
BrainSpec decode_brain(const Cppn& genome, const BodyGraph& body, const DecodeLimits& limits);

// One member of the evolving population: two genomes and their cached
// phenotype and evaluation results.
struct Individual {
    std::uint64_t id = 0;
    Cppn body_genome;
    Cppn brain_genome;
    BodyGraph body;
    std::optional<double> fitness;
    std::optional<DescriptorVector> descriptors;
    int linear_actuator_count = 0;
};

int count_linear_actuators(const BodyGraph& body);

}  // namespace roboevo
