#pragma once

#include <cstdint>
#include <vector>

#include "roboevo/descriptors_types.hpp"
#include "roboevo/morphology.hpp"

namespace roboevo {

// Computes the eight descriptors on the grid projection of a valid body.
//
//   branching        m4 / floor((m-2)/3) for m >= 5, else 0, where m4 counts
//                    modules with all four faces attached
//   coverage         m / (w*l*h) of the cell bounding box
//   rel_joints       joints attached on both faces / floor((m-1)/2), clamped
//                    to 1 (a pure joint chain exceeds the normalizer)
//   rel_limbs        leaf modules (one face attached, core excluded) / l_max,
//                    l_max = 2*floor((m-6)/3) + ((m-6) mod 3 > 0) + 4 for
//                    m >= 6, else m-1
//   rel_limb_length  mean length of leaf-terminated chains of modules with at
//                    most two attached faces, divided by m-1
//   proportion       shortest / longest side of the 2D (x,y) cell bounding box
//   absolute_size    m
//   symmetry         best of the two core-centered grid axes on the (x,y)
//                    projection: mirrored off-axis cells / off-axis cells
DescriptorVector descriptor_vector(const BodyGraph& body);

struct DescriptorRow {
    std::uint64_t id = 0;
    DescriptorVector descriptors;
};

// One row per individual, ordered by id.
std::vector<DescriptorRow> descriptor_matrix(
    const std::vector<std::pair<std::uint64_t, const BodyGraph*>>& population);

}  // namespace roboevo
