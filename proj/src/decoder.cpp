#include "roboevo/decoder.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace roboevo {

namespace {

struct GrowthSite {
    std::vector<int> tree_path;  // slot indices from the root to the module
    ModuleKind kind;
    GridFrame frame;
    IVec3 cell;
};

BodyNode* node_at(BodyGraph& body, const std::vector<int>& tree_path) {
    BodyNode* node = &body.root;
    for (const int slot : tree_path) {
        node = &node->children.at(slot);
    }
    return node;
}

}  // namespace

BodyGraph decode_body(const Cppn& genome, const DecodeLimits& limits) {
    if (genome.input_count != kBodyInputs || genome.output_count != kBodyOutputs) {
        throw std::invalid_argument("decode_body: genome must have 3 inputs and 6 outputs");
    }

    BodyGraph body;
    body.root = BodyNode{ModuleKind::Core, 0, {}};
    int placed = 1;

    std::set<IVec3> occupied{{0, 0, 0}};
    std::deque<GrowthSite> frontier;
    frontier.push_back({{}, ModuleKind::Core, GridFrame{}, {0, 0, 0}});

    const double radius = static_cast<double>(limits.grid_radius);

    while (!frontier.empty() && placed < limits.max_modules) {
        const GrowthSite site = frontier.front();
        frontier.pop_front();

        for (const int slot : child_slots(site.kind, site.tree_path.empty())) {
            if (placed >= limits.max_modules) {
                break;
            }
            const IVec3 cell = site.cell + site.frame.apply(slot_direction(site.kind, slot));
            if (occupied.count(cell) != 0) {
                continue;  // blocked, not queried
            }
            if (std::abs(cell.x) > limits.grid_radius || std::abs(cell.y) > limits.grid_radius ||
                std::abs(cell.z) > limits.grid_radius) {
                continue;
            }

            const auto outputs = evaluate(genome, {cell.x / radius, cell.y / radius, cell.z / radius});

            // argmax over kind scores; the core slot counts as an empty vote
            // since only one core exists, and the linear actuator is excluded
            // when the experiment runs without it.
            int best = -1;
            double best_score = 0.0;
            for (int k = 0; k < kModuleKindCount; ++k) {
                const auto kind = static_cast<ModuleKind>(k);
                if (kind == ModuleKind::LinearActuator && !limits.linear_actuator_enabled) {
                    continue;
                }
                if (best < 0 || outputs[static_cast<std::size_t>(k)] > best_score) {
                    best = k;
                    best_score = outputs[static_cast<std::size_t>(k)];
                }
            }
            if (best_score <= 0.0 || static_cast<ModuleKind>(best) == ModuleKind::Core) {
                continue;
            }

            BodyNode child;
            child.kind = static_cast<ModuleKind>(best);
            if (child.kind == ModuleKind::Brick && outputs[kModuleKindCount] > 0.0) {
                child.rotation = 90;
            }

            BodyNode* parent = node_at(body, site.tree_path);
            parent->children.emplace(slot, child);
            ++placed;
            occupied.insert(cell);

            GrowthSite next;
            next.tree_path = site.tree_path;
            next.tree_path.push_back(slot);
            next.kind = child.kind;
            next.cell = cell;
            {
                // Same frame composition as the grid projection.
                GridFrame f = site.frame.yawed(slot_count(site.kind) == 4 ? slot
                                                                          : (slot == 0 ? 0 : 2));
                if (child.kind == ModuleKind::Brick && child.rotation == 90) {
                    f = f.pitched_up();
                }
                next.frame = f;
            }
            frontier.push_back(next);
        }
    }
    return body;
}

BrainSpec decode_brain(const Cppn& genome, const BodyGraph& body, const DecodeLimits& limits) {
    if (genome.input_count != kBrainInputs || genome.output_count != kBrainOutputs) {
        throw std::invalid_argument("decode_brain: genome must have 6 inputs and 1 output");
    }

    const BodyGrid grid = to_grid(body);
    BrainSpec spec;
    for (std::size_t i = 0; i < grid.modules.size(); ++i) {
        if (is_joint(grid.modules[i].kind)) {
            spec.joint_modules.push_back(static_cast<int>(i));
            spec.joint_kinds.push_back(grid.modules[i].kind);
        }
    }

    const double radius = static_cast<double>(limits.grid_radius);
    const auto normalized = [radius](const IVec3& c) {
        return std::array<double, 3>{c.x / radius, c.y / radius, c.z / radius};
    };

    const int n = static_cast<int>(spec.joint_modules.size());
    for (int a = 0; a < n; ++a) {
        const IVec3 cell_a = grid.modules[static_cast<std::size_t>(spec.joint_modules[a])].cell;
        for (int b = 0; b < n; ++b) {
            const IVec3 cell_b = grid.modules[static_cast<std::size_t>(spec.joint_modules[b])].cell;
            if (a != b && manhattan(cell_a, cell_b) > limits.cpg_neighborhood) {
                continue;
            }
            const auto pa = normalized(cell_a);
            const auto pb = normalized(cell_b);
            const double raw =
                evaluate(genome, {pa[0], pa[1], pa[2], pb[0], pb[1], pb[2]})[0];
            const double w = std::min(limits.weight_clamp, std::max(-limits.weight_clamp, raw));
            spec.edges.push_back({a, b, w});
        }
    }
    return spec;
}

int count_linear_actuators(const BodyGraph& body) {
    int count = 0;
    const auto walk = [&count](const BodyNode& node, const auto& self) -> void {
        if (node.kind == ModuleKind::LinearActuator) {
            ++count;
        }
        for (const auto& [slot, child] : node.children) {
            (void)slot;
            self(child, self);
        }
    };
    walk(body.root, walk);
    return count;
}

}  // namespace roboevo
