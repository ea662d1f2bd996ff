#pragma once

#include <array>
#include <string>

namespace roboevo {

// The eight morphological descriptors. All but absolute_size are normalized
// to [0,1]; absolute_size is the raw module count with a /10 variant kept
// alongside for normalized comparisons.
struct DescriptorVector {
    double branching = 0.0;
    double coverage = 0.0;
    double rel_joints = 0.0;
    double rel_limbs = 0.0;
    double rel_limb_length = 0.0;
    double proportion = 0.0;
    int absolute_size = 1;
    double symmetry = 0.0;

    double absolute_size_normalized() const { return absolute_size / 10.0; }

    std::array<double, 8> as_array() const {
        return {branching,  coverage,   rel_joints,
                rel_limbs,  rel_limb_length, proportion,
                static_cast<double>(absolute_size), symmetry};
    }
};

inline const std::array<std::string, 8>& descriptor_names() {
    static const std::array<std::string, 8> names = {
        "branching",  "coverage",        "rel_joints", "rel_limbs",
        "rel_limb_length", "proportion", "absolute_size", "symmetry"};
    return names;
}

}  // namespace roboevo
