#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roboevo/geom.hpp"

namespace roboevo {

// Square heightfield centered on the origin. Heights live on the corners of a
// resolution x resolution cell grid; queries bilinearly interpolate within a
// cell and clamp to the border outside the extent.
class Heightmap {
public:
    static constexpr double kDefaultCellSize = 0.1;

    // Flat terrain, heights exactly zero everywhere.
    static Heightmap plain(double extent_m, double cell_size = kDefaultCellSize);

    // Cosine-interpolated value noise at the given wavelength, scaled so
    // |height| <= amplitude. Deterministic in (seed, params).
    // Requires amplitude > 0 and wavelength > 2 * cell_size.
    static Heightmap rough(double extent_m, double amplitude, double wavelength,
                           std::uint64_t seed, double cell_size = kDefaultCellSize);

    // Corner-grid constructor for fixtures and imports.
    Heightmap(int resolution, double cell_size, std::vector<double> corner_heights,
              double amplitude, double wavelength, std::uint64_t seed);

    double height_at(double x, double y) const;
    Vec3 normal_at(double x, double y) const;
    bool in_bounds(double x, double y) const;

    int resolution() const { return resolution_; }
    double cell_size() const { return cell_size_; }
    double extent() const { return resolution_ * cell_size_; }
    double amplitude() const { return amplitude_; }
    double wavelength() const { return wavelength_; }
    std::uint64_t seed() const { return seed_; }
    double corner(int i, int j) const;  // row i (y), column j (x)
    double mean_height() const;
    double max_abs_height() const;

    // Plain-text grid exchange format: a header line
    //   resolution cell_size amplitude wavelength seed
    // followed by resolution+1 rows of resolution+1 corner heights.
    std::string export_text() const;
    static Heightmap import_text(const std::string& text);

private:
    int resolution_ = 0;
    double cell_size_ = kDefaultCellSize;
    double amplitude_ = 0.0;
    double wavelength_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> corners_;  // (resolution_+1)^2, row-major by y
};

}  // namespace roboevo
