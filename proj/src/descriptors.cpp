#include "roboevo/descriptors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace roboevo {

namespace {

// Attached-face count per module: one for the parent link plus one per child.
std::vector<int> attached_faces(const BodyGrid& grid) {
    std::vector<int> attached(grid.modules.size(), 0);
    for (std::size_t i = 1; i < grid.modules.size(); ++i) {
        ++attached[i];
        ++attached[static_cast<std::size_t>(grid.modules[i].parent)];
    }
    return attached;
}

}  // namespace

DescriptorVector descriptor_vector(const BodyGraph& body) {
    const BodyGrid grid = to_grid(body);
    const int m = static_cast<int>(grid.modules.size());
    const std::vector<int> attached = attached_faces(grid);

    DescriptorVector d;
    d.absolute_size = m;

    // Branching.
    int four_attached = 0;
    for (std::size_t i = 0; i < grid.modules.size(); ++i) {
        if (attached[i] == 4) {
            ++four_attached;
        }
    }
    if (m >= 5) {
        d.branching = static_cast<double>(four_attached) / static_cast<double>((m - 2) / 3);
    }

    // Bounding boxes.
    IVec3 lo = grid.modules[0].cell;
    IVec3 hi = lo;
    for (const auto& mod : grid.modules) {
        lo.x = std::min(lo.x, mod.cell.x);
        lo.y = std::min(lo.y, mod.cell.y);
        lo.z = std::min(lo.z, mod.cell.z);
        hi.x = std::max(hi.x, mod.cell.x);
        hi.y = std::max(hi.y, mod.cell.y);
        hi.z = std::max(hi.z, mod.cell.z);
    }
    const int w = hi.x - lo.x + 1;
    const int l = hi.y - lo.y + 1;
    const int h = hi.z - lo.z + 1;
    d.coverage = static_cast<double>(m) / static_cast<double>(w * l * h);

    // Relative number of joints: both faces attached means parent plus at
    // least one child. A chain of joints can exceed floor((m-1)/2), so the
    // ratio is clamped to keep the descriptor in [0,1].
    int joints_attached = 0;
    for (std::size_t i = 0; i < grid.modules.size(); ++i) {
        if (is_joint(grid.modules[i].kind) && attached[i] >= 2) {
            ++joints_attached;
        }
    }
    const int j_max = (m - 1) / 2;
    if (j_max > 0) {
        d.rel_joints = std::min(1.0, static_cast<double>(joints_attached) /
                                         static_cast<double>(j_max));
    }

    // Relative number of limbs.
    int leaves = 0;
    for (std::size_t i = 1; i < grid.modules.size(); ++i) {
        if (attached[i] == 1) {
            ++leaves;
        }
    }
    int l_max = m - 1;
    if (m >= 6) {
        l_max = 2 * ((m - 6) / 3) + ((m - 6) % 3 > 0 ? 1 : 0) + 4;
    }
    if (l_max > 0) {
        d.rel_limbs = static_cast<double>(leaves) / static_cast<double>(l_max);
    }

    // Relative length of limbs: from each leaf, walk up through non-core
    // modules that have exactly two attached faces. Chains cannot merge, so
    // each module belongs to at most one limb.
    if (m > 1) {
        double total_length = 0.0;
        int limb_count = 0;
        for (std::size_t i = 1; i < grid.modules.size(); ++i) {
            if (attached[i] != 1) {
                continue;
            }
            int length = 1;
            int parent = grid.modules[i].parent;
            while (parent > 0 && attached[static_cast<std::size_t>(parent)] == 2) {
                ++length;
                parent = grid.modules[static_cast<std::size_t>(parent)].parent;
            }
            total_length += length;
            ++limb_count;
        }
        if (limb_count > 0) {
            d.rel_limb_length = total_length / limb_count / static_cast<double>(m - 1);
        }
    }

    // Proportion on the (x,y) projection.
    const int side_a = hi.x - lo.x + 1;
    const int side_b = hi.y - lo.y + 1;
    d.proportion = static_cast<double>(std::min(side_a, side_b)) /
                   static_cast<double>(std::max(side_a, side_b));

    // Symmetry: mirror the (x,y) projection across the two grid axes through
    // the core and take the better match.
    std::set<std::pair<int, int>> projected;
    for (const auto& mod : grid.modules) {
        projected.insert({mod.cell.x, mod.cell.y});
    }
    double axis_score[2];
    for (int axis = 0; axis < 2; ++axis) {
        int off_axis = 0;
        int matched = 0;
        for (const auto& [x, y] : projected) {
            const int coord = axis == 0 ? x : y;
            if (coord == 0) {
                continue;
            }
            ++off_axis;
            const auto mirrored = axis == 0 ? std::make_pair(-x, y) : std::make_pair(x, -y);
            if (projected.count(mirrored) != 0) {
                ++matched;
            }
        }
        axis_score[axis] =
            off_axis == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(off_axis);
    }
    d.symmetry = std::max(axis_score[0], axis_score[1]);

    return d;
}

std::vector<DescriptorRow> descriptor_matrix(
    const std::vector<std::pair<std::uint64_t, const BodyGraph*>>& population) {
    std::vector<DescriptorRow> rows;
    rows.reserve(population.size());
    for (const auto& [id, bodyptr] : population) {
        rows.push_back({id, descriptor_vector(*bodyptr)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const DescriptorRow& a, const DescriptorRow& b) { return a.id < b.id; });
    return rows;
}

}  // namespace roboevo
