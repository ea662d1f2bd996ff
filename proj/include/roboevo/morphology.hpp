#pragma once

#include <map>
#include <string>
#include <vector>

#include "roboevo/geom.hpp"

namespace roboevo {

// The five module kinds. Core holds the controller board and appears exactly
// once, as the root. Brick is passive structure and may be rotated 90 degrees,
// which redirects growth through it into the vertical axis. The two hinges are
// servo joints about the horizontal and vertical axes; the linear actuator
// extends and retracts along its own axis.
enum class ModuleKind { Core, Brick, HingeHorizontal, HingeVertical, LinearActuator };

constexpr int kModuleKindCount = 5;
constexpr int kMaxModules = 10;

const char* module_kind_name(ModuleKind kind);
bool module_kind_from_name(const std::string& name, ModuleKind& out);
bool is_joint(ModuleKind kind);

// Number of attachment slots a module exposes (4 lateral faces for core and
// brick, 2 opposite faces for hinges and the linear actuator).
int slot_count(ModuleKind kind);

// Slot indices that can hold a child. For non-core modules the rear slot is
// reserved for the parent link: slot 2 on 4-slot modules, slot 1 on 2-slot
// modules. Slot directions in the module's local frame:
//   4-slot: 0 -> fwd, 1 -> left, 2 -> back, 3 -> right
//   2-slot: 0 -> fwd, 1 -> back
std::vector<int> child_slots(ModuleKind kind, bool is_root);
IVec3 slot_direction(ModuleKind kind, int slot);

struct BodyNode {
    ModuleKind kind = ModuleKind::Core;
    int rotation = 0;  // degrees, 0 or 90; 90 only valid on Brick
    std::map<int, BodyNode> children;
};

// A robot body: a tree of modules rooted at the core.
struct BodyGraph {
    BodyNode root;
};

int module_count(const BodyGraph& body);

struct PlacedModule {
    IVec3 cell;
    ModuleKind kind;
    int rotation = 0;
    GridFrame frame;      // module's local frame in grid coordinates
    int parent = -1;      // index into BodyGrid::modules, -1 for core
    int parent_slot = -1; // slot on the parent this module hangs from
    std::string path;     // "/" for core, "/0/2" = child at slot 2 of child at slot 0
};

// Grid projection of a body: one cell per module, core at the origin.
struct BodyGrid {
    std::vector<PlacedModule> modules;           // depth-first, parent before child
    std::map<IVec3, ModuleKind> cells;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks every structural invariant: single core at the root, rotation only
// on bricks, slot indices legal for the kind, the parent-facing slot unused,
// module count within [1, max_modules], and a collision-free grid projection.
// Violations are reported as data; validate never throws.
ValidationReport validate(const BodyGraph& body, int max_modules = kMaxModules);

// Walks parent->child face directions from the core at (0,0,0) and assigns
// each module an integer cell. Throws std::runtime_error on a cell collision
// or an illegal slot (validate catches both first).
BodyGrid to_grid(const BodyGraph& body);

// Canonical JSON document for a body. serialize is deterministic (sorted
// keys, fixed schema), so byte equality of documents implies structural
// equality of bodies.
std::string serialize(const BodyGraph& body);
BodyGraph deserialize(const std::string& document);

bool structurally_equal(const BodyGraph& a, const BodyGraph& b);

}  // namespace roboevo
