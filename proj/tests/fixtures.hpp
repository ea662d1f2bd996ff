#pragma once

// Shared hand-built bodies and genomes used across the test suites.

#include <map>

#include "roboevo/decoder.hpp"
#include "roboevo/genome.hpp"
#include "roboevo/morphology.hpp"
#include "roboevo/rng.hpp"

namespace fixtures {

using namespace roboevo;

inline BodyNode node(ModuleKind kind, int rotation = 0, std::map<int, BodyNode> children = {}) {
    BodyNode n;
    n.kind = kind;
    n.rotation = rotation;
    n.children = std::move(children);
    return n;
}

inline BodyGraph core_only() {
    BodyGraph body;
    body.root = node(ModuleKind::Core);
    return body;
}

// Core plus four bricks growing east: a straight 5-module chain.
inline BodyGraph chain5() {
    BodyGraph body;
    body.root = node(
        ModuleKind::Core, 0,
        {{0, node(ModuleKind::Brick, 0,
                  {{0, node(ModuleKind::Brick, 0,
                            {{0, node(ModuleKind::Brick, 0, {{0, node(ModuleKind::Brick)}})}})}})}});
    return body;
}

// Core with one brick on each lateral face.
inline BodyGraph plus5() {
    BodyGraph body;
    body.root = node(ModuleKind::Core, 0,
                     {{0, node(ModuleKind::Brick)},
                      {1, node(ModuleKind::Brick)},
                      {2, node(ModuleKind::Brick)},
                      {3, node(ModuleKind::Brick)}});
    return body;
}

inline BodyGraph core_plus_hinge() {
    BodyGraph body;
    body.root = node(ModuleKind::Core, 0, {{0, node(ModuleKind::HingeHorizontal)}});
    return body;
}

// Ten modules, all five kinds, one rotated brick; collision-free by layout.
inline BodyGraph ten_module_all_kinds() {
    BodyGraph body;
    body.root = node(
        ModuleKind::Core, 0,
        {{0, node(ModuleKind::HingeHorizontal, 0,
                  {{0, node(ModuleKind::Brick, 0,
                            {{0, node(ModuleKind::Brick, 90, {{0, node(ModuleKind::Brick)}})}})}})},
         {1, node(ModuleKind::HingeVertical, 0,
                  {{0, node(ModuleKind::LinearActuator, 0,
                            {{0, node(ModuleKind::HingeHorizontal)}})}})},
         {2, node(ModuleKind::LinearActuator)},
         {3, node(ModuleKind::Brick)}});
    return body;
}

// Four non-core modules chained by left turns fold back onto the core cell.
inline BodyGraph loopback_collision() {
    BodyGraph body;
    body.root = node(
        ModuleKind::Core, 0,
        {{0, node(ModuleKind::Brick, 0,
                  {{1, node(ModuleKind::Brick, 0,
                            {{1, node(ModuleKind::Brick, 0, {{1, node(ModuleKind::Brick)}})}})}})}});
    return body;
}

// A small articulated walker: hinges on two sides of the core.
inline BodyGraph hinge_walker() {
    BodyGraph body;
    body.root = node(ModuleKind::Core, 0,
                     {{0, node(ModuleKind::HingeHorizontal, 0, {{0, node(ModuleKind::Brick)}})},
                      {2, node(ModuleKind::HingeHorizontal, 0, {{0, node(ModuleKind::Brick)}})}});
    return body;
}

// One paddling arm: asymmetric, so the drag cycle produces net motion.
inline BodyGraph crawler() {
    BodyGraph body;
    body.root = node(
        ModuleKind::Core, 0,
        {{0, node(ModuleKind::HingeHorizontal, 0,
                  {{0, node(ModuleKind::Brick, 0, {{0, node(ModuleKind::Brick)}})}})}});
    return body;
}

// Body genome whose outputs are all zero: identity outputs, no connections.
inline Cppn empty_body_genome() {
    Cppn g;
    g.input_count = kBodyInputs;
    g.output_count = kBodyOutputs;
    for (int i = 0; i < g.input_count; ++i) {
        g.nodes.push_back({i, Activation::Identity});
    }
    for (int j = 0; j < g.output_count; ++j) {
        g.nodes.push_back({g.input_count + j, Activation::Identity});
    }
    return g;
}

// Constant positive score for one module kind (sigmoid(0) = 0.5), zero for
// the rest; rotation score zero.
inline Cppn constant_kind_genome(ModuleKind kind) {
    Cppn g = empty_body_genome();
    g.nodes[static_cast<std::size_t>(g.input_count + static_cast<int>(kind))].activation =
        Activation::Sigmoid;
    return g;
}

// Brain genome computing a constant via an unconnected output node.
inline Cppn constant_brain_genome(Activation output_activation) {
    Cppn g;
    g.input_count = kBrainInputs;
    g.output_count = kBrainOutputs;
    for (int i = 0; i < g.input_count; ++i) {
        g.nodes.push_back({i, Activation::Identity});
    }
    g.nodes.push_back({g.input_count, output_activation});
    return g;
}

// Random genome grown by a few registered mutations; used by property tests.
inline Cppn random_genome(int inputs, int outputs, InnovationRegistry& registry, Rng& rng,
                          int mutations = 8) {
    MutationParams params;
    params.p_add_connection = 0.3;
    params.p_add_node = 0.3;
    Cppn g = minimal_cppn(inputs, outputs, params.weight_range, rng);
    for (int i = 0; i < mutations; ++i) {
        g = mutate(g, params, registry, rng);
    }
    return g;
}

}  // namespace fixtures
