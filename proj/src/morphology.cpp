#include "roboevo/morphology.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace roboevo {

using nlohmann::json;

const char* module_kind_name(ModuleKind kind) {
    switch (kind) {
        case ModuleKind::Core: return "core";
        case ModuleKind::Brick: return "brick";
        case ModuleKind::HingeHorizontal: return "hinge_horizontal";
        case ModuleKind::HingeVertical: return "hinge_vertical";
        case ModuleKind::LinearActuator: return "linear_actuator";
    }
    return "?";
}

bool module_kind_from_name(const std::string& name, ModuleKind& out) {
    for (int i = 0; i < kModuleKindCount; ++i) {
        const auto kind = static_cast<ModuleKind>(i);
        if (name == module_kind_name(kind)) {
            out = kind;
            return true;
        }
    }
    return false;
}

bool is_joint(ModuleKind kind) {
    return kind == ModuleKind::HingeHorizontal || kind == ModuleKind::HingeVertical ||
           kind == ModuleKind::LinearActuator;
}

int slot_count(ModuleKind kind) {
    return (kind == ModuleKind::Core || kind == ModuleKind::Brick) ? 4 : 2;
}

static int parent_slot_of(ModuleKind kind) {
    return slot_count(kind) == 4 ? 2 : 1;
}

std::vector<int> child_slots(ModuleKind kind, bool is_root) {
    std::vector<int> slots;
    const int reserved = is_root ? -1 : parent_slot_of(kind);
    for (int s = 0; s < slot_count(kind); ++s) {
        if (s != reserved) {
            slots.push_back(s);
        }
    }
    return slots;
}

IVec3 slot_direction(ModuleKind kind, int slot) {
    if (slot_count(kind) == 4) {
        switch (slot) {
            case 0: return {1, 0, 0};
            case 1: return {0, 1, 0};
            case 2: return {-1, 0, 0};
            case 3: return {0, -1, 0};
        }
    } else {
        switch (slot) {
            case 0: return {1, 0, 0};
            case 1: return {-1, 0, 0};
        }
    }
    throw std::out_of_range("slot index out of range for module kind");
}

int module_count(const BodyGraph& body) {
    int count = 0;
    const auto walk = [&count](const BodyNode& node, const auto& self) -> void {
        ++count;
        for (const auto& [slot, child] : node.children) {
            (void)slot;
            self(child, self);
        }
    };
    walk(body.root, walk);
    return count;
}

// Child frame: rotate the parent frame so local fwd points along the slot
// direction, then, for a 90-degree brick, pitch so the former up becomes the
// growth direction.
static GridFrame child_frame(const GridFrame& parent, ModuleKind parent_kind, int slot,
                             const BodyNode& child) {
    int quarter_turns = 0;
    if (slot_count(parent_kind) == 4) {
        quarter_turns = slot;  // 0: fwd, 1: left, 2: back, 3: right
    } else {
        quarter_turns = (slot == 0) ? 0 : 2;
    }
    GridFrame f = parent.yawed(quarter_turns);
    if (child.kind == ModuleKind::Brick && child.rotation == 90) {
        f = f.pitched_up();
    }
    return f;
}

// `placed` is taken by value: grid.modules reallocates while the subtree grows.
static void place_subtree(const BodyNode& node, const PlacedModule placed, int placed_index,
                          BodyGrid& grid, std::vector<std::string>* violations) {
    for (const auto& [slot, child] : node.children) {
        const IVec3 dir = placed.frame.apply(slot_direction(node.kind, slot));
        PlacedModule next;
        next.cell = placed.cell + dir;
        next.kind = child.kind;
        next.rotation = child.rotation;
        next.frame = child_frame(placed.frame, node.kind, slot, child);
        next.parent = placed_index;
        next.parent_slot = slot;
        next.path = (placed.path == "/" ? "/" : placed.path + "/") + std::to_string(slot);

        const auto [it, inserted] = grid.cells.emplace(next.cell, child.kind);
        (void)it;
        if (!inserted) {
            const std::string msg = "cell collision at (" + std::to_string(next.cell.x) + "," +
                                    std::to_string(next.cell.y) + "," + std::to_string(next.cell.z) +
                                    ") from node " + next.path;
            if (violations != nullptr) {
                violations->push_back(msg);
                continue;  // keep scanning for further violations
            }
            throw std::runtime_error(msg);
        }
        grid.modules.push_back(next);
        const int next_index = static_cast<int>(grid.modules.size()) - 1;
        place_subtree(child, next, next_index, grid, violations);
    }
}

static BodyGrid project(const BodyGraph& body, std::vector<std::string>* violations) {
    BodyGrid grid;
    PlacedModule core;
    core.cell = {0, 0, 0};
    core.kind = body.root.kind;
    core.rotation = body.root.rotation;
    core.frame = GridFrame{};
    core.path = "/";
    grid.cells.emplace(core.cell, core.kind);
    grid.modules.push_back(core);
    place_subtree(body.root, core, 0, grid, violations);
    return grid;
}

static void check_node(const BodyNode& node, const std::string& path, bool is_root,
                       ValidationReport& report) {
    if (is_root) {
        if (node.kind != ModuleKind::Core) {
            report.violations.push_back("root module is not a core at " + path);
        }
    } else if (node.kind == ModuleKind::Core) {
        report.violations.push_back("core appears more than once at " + path);
    }
    if (node.rotation != 0 && !(node.kind == ModuleKind::Brick && node.rotation == 90)) {
        report.violations.push_back("rotation " + std::to_string(node.rotation) +
                                    " not allowed on " + module_kind_name(node.kind) + " at " + path);
    }
    const auto legal = child_slots(node.kind, is_root);
    for (const auto& [slot, child] : node.children) {
        bool ok = false;
        for (int s : legal) {
            ok = ok || s == slot;
        }
        const std::string child_path = (path == "/" ? "/" : path + "/") + std::to_string(slot);
        if (!ok) {
            report.violations.push_back("slot " + std::to_string(slot) + " not attachable on " +
                                        module_kind_name(node.kind) + " at " + path);
        }
        check_node(child, child_path, false, report);
    }
}

ValidationReport validate(const BodyGraph& body, int max_modules) {
    ValidationReport report;
    check_node(body.root, "/", true, report);

    const int count = module_count(body);
    if (count > max_modules) {
        report.violations.push_back("module_count > " + std::to_string(max_modules));
    }

    // Grid projection only makes sense once the slot structure is sound.
    if (report.violations.empty()) {
        project(body, &report.violations);
    }
    report.ok = report.violations.empty();
    return report;
}

BodyGrid to_grid(const BodyGraph& body) {
    return project(body, nullptr);
}

static json node_to_json(const BodyNode& node) {
    json j;
    j["kind"] = module_kind_name(node.kind);
    j["rotation"] = node.rotation;
    json children = json::object();
    for (const auto& [slot, child] : node.children) {
        children[std::to_string(slot)] = node_to_json(child);
    }
    j["children"] = children;
    return j;
}

std::string serialize(const BodyGraph& body) {
    json doc;
    doc["format_version"] = 1;
    doc["body"] = node_to_json(body.root);
    return doc.dump(2) + "\n";
}

static BodyNode node_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw std::runtime_error("schema error: node at " + path + " is not an object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "kind" && key != "rotation" && key != "children") {
            throw std::runtime_error("schema error: unknown field \"" + key + "\" at " + path);
        }
    }
    if (!j.contains("kind")) {
        throw std::runtime_error("schema error: missing field \"kind\" at " + path);
    }
    BodyNode node;
    const auto kind_name = j.at("kind").get<std::string>();
    if (!module_kind_from_name(kind_name, node.kind)) {
        throw std::runtime_error("schema error: unknown module kind \"" + kind_name + "\" at " + path);
    }
    node.rotation = j.value("rotation", 0);
    if (j.contains("children")) {
        const auto& children = j.at("children");
        if (!children.is_object()) {
            throw std::runtime_error("schema error: \"children\" at " + path + " is not an object");
        }
        for (const auto& [slot_str, child_json] : children.items()) {
            int slot = 0;
            try {
                slot = std::stoi(slot_str);
            } catch (const std::exception&) {
                throw std::runtime_error("schema error: non-integer slot key \"" + slot_str +
                                         "\" at " + path);
            }
            const std::string child_path = (path == "/" ? "/" : path + "/") + slot_str;
            node.children.emplace(slot, node_from_json(child_json, child_path));
        }
    }
    return node;
}

BodyGraph deserialize(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("parse error: ") + e.what());
    }
    if (!doc.contains("format_version")) {
        throw std::runtime_error("schema error: missing field \"format_version\"");
    }
    if (doc.at("format_version").get<int>() != 1) {
        throw std::runtime_error("schema error: unsupported format_version");
    }
    if (!doc.contains("body")) {
        throw std::runtime_error("schema error: missing field \"body\"");
    }
    BodyGraph body;
    body.root = node_from_json(doc.at("body"), "/");
    return body;
}

static bool nodes_equal(const BodyNode& a, const BodyNode& b) {
    if (a.kind != b.kind || a.rotation != b.rotation || a.children.size() != b.children.size()) {
        return false;
    }
    auto ita = a.children.begin();
    auto itb = b.children.begin();
    for (; ita != a.children.end(); ++ita, ++itb) {
        if (ita->first != itb->first || !nodes_equal(ita->second, itb->second)) {
            return false;
        }
    }
    return true;
}

bool structurally_equal(const BodyGraph& a, const BodyGraph& b) {
    return nodes_equal(a.root, b.root);
}

}  // namespace roboevo
