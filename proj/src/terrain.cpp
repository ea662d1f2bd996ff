#include "roboevo/terrain.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace roboevo {

namespace {

std::uint64_t hash_cell(std::uint64_t seed, std::int64_t i, std::int64_t j) {
    std::uint64_t x = seed;
    x ^= static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL;
    x ^= static_cast<std::uint64_t>(j) * 0xC2B2AE3D27D4EB4FULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Lattice value in [-1, 1], deterministic in (seed, cell).
double lattice_value(std::uint64_t seed, std::int64_t i, std::int64_t j) {
    return static_cast<double>(hash_cell(seed, i, j) >> 11) * 0x1.0p-52 - 1.0;
}

double cosine_blend(double t) { return (1.0 - std::cos(3.14159265358979323846 * t)) / 2.0; }

double value_noise(std::uint64_t seed, double u, double v) {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const auto i = static_cast<std::int64_t>(fu);
    const auto j = static_cast<std::int64_t>(fv);
    const double su = cosine_blend(u - fu);
    const double sv = cosine_blend(v - fv);
    const double v00 = lattice_value(seed, i, j);
    const double v10 = lattice_value(seed, i + 1, j);
    const double v01 = lattice_value(seed, i, j + 1);
    const double v11 = lattice_value(seed, i + 1, j + 1);
    const double a = v00 + (v10 - v00) * su;
    const double b = v01 + (v11 - v01) * su;
    return a + (b - a) * sv;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

Heightmap::Heightmap(int resolution, double cell_size, std::vector<double> corner_heights,
                     double amplitude, double wavelength, std::uint64_t seed)
    : resolution_(resolution),
      cell_size_(cell_size),
      amplitude_(amplitude),
      wavelength_(wavelength),
      seed_(seed),
      corners_(std::move(corner_heights)) {
    const auto expected = static_cast<std::size_t>(resolution_ + 1) *
                          static_cast<std::size_t>(resolution_ + 1);
    if (resolution_ < 1 || cell_size_ <= 0.0 || corners_.size() != expected) {
        throw std::invalid_argument("Heightmap: inconsistent grid dimensions");
    }
}

Heightmap Heightmap::plain(double extent_m, double cell_size) {
    if (!(extent_m > 0.0)) {
        throw std::invalid_argument("plain: extent must be positive");
    }
    const int resolution = std::max(1, static_cast<int>(std::llround(extent_m / cell_size)));
    const auto n = static_cast<std::size_t>(resolution + 1);
    return Heightmap(resolution, cell_size, std::vector<double>(n * n, 0.0), 0.0, 0.0, 0);
}

Heightmap Heightmap::rough(double extent_m, double amplitude, double wavelength,
                           std::uint64_t seed, double cell_size) {
    if (!(extent_m > 0.0)) {
        throw std::invalid_argument("rough: extent must be positive");
    }
    if (!(amplitude > 0.0)) {
        throw std::invalid_argument("rough: amplitude must be positive");
    }
    if (!(wavelength > 2.0 * cell_size)) {
        throw std::invalid_argument("rough: wavelength must exceed two cell sizes");
    }
    const int resolution = std::max(1, static_cast<int>(std::llround(extent_m / cell_size)));
    const double half = resolution * cell_size / 2.0;
    std::vector<double> corners;
    corners.reserve(static_cast<std::size_t>(resolution + 1) *
                    static_cast<std::size_t>(resolution + 1));
    for (int i = 0; i <= resolution; ++i) {
        const double y = i * cell_size - half;
        for (int j = 0; j <= resolution; ++j) {
            const double x = j * cell_size - half;
            corners.push_back(amplitude * value_noise(seed, x / wavelength, y / wavelength));
        }
    }
    return Heightmap(resolution, cell_size, std::move(corners), amplitude, wavelength, seed);
}

double Heightmap::corner(int i, int j) const {
    return corners_[static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution_ + 1) +
                    static_cast<std::size_t>(j)];
}

bool Heightmap::in_bounds(double x, double y) const {
    const double half = extent() / 2.0;
    return x >= -half && x <= half && y >= -half && y <= half;
}

double Heightmap::height_at(double x, double y) const {
    const double half = extent() / 2.0;
    // Border clamp: off-map queries continue on the edge height.
    const double cx = std::min(half, std::max(-half, x));
    const double cy = std::min(half, std::max(-half, y));
    double gx = (cx + half) / cell_size_;
    double gy = (cy + half) / cell_size_;
    gx = std::min(gx, static_cast<double>(resolution_));
    gy = std::min(gy, static_cast<double>(resolution_));
    const int j = std::min(resolution_ - 1, static_cast<int>(gx));
    const int i = std::min(resolution_ - 1, static_cast<int>(gy));
    const double tx = gx - j;
    const double ty = gy - i;
    const double h00 = corner(i, j);
    const double h10 = corner(i, j + 1);
    const double h01 = corner(i + 1, j);
    const double h11 = corner(i + 1, j + 1);
    const double a = h00 + (h10 - h00) * tx;
    const double b = h01 + (h11 - h01) * tx;
    return a + (b - a) * ty;
}

Vec3 Heightmap::normal_at(double x, double y) const {
    const double e = cell_size_;
    const double dzdx = (height_at(x + e, y) - height_at(x - e, y)) / (2.0 * e);
    const double dzdy = (height_at(x, y + e) - height_at(x, y - e)) / (2.0 * e);
    return Vec3{-dzdx, -dzdy, 1.0}.normalized();
}

double Heightmap::mean_height() const {
    double sum = 0.0;
    for (const double h : corners_) {
        sum += h;
    }
    return sum / static_cast<double>(corners_.size());
}

double Heightmap::max_abs_height() const {
    double m = 0.0;
    for (const double h : corners_) {
        m = std::max(m, std::abs(h));
    }
    return m;
}

std::string Heightmap::export_text() const {
    std::string out;
    out += std::to_string(resolution_);
    out += ' ';
    append_double(out, cell_size_);
    out += ' ';
    append_double(out, amplitude_);
    out += ' ';
    append_double(out, wavelength_);
    out += ' ';
    out += std::to_string(seed_);
    out += '\n';
    for (int i = 0; i <= resolution_; ++i) {
        for (int j = 0; j <= resolution_; ++j) {
            if (j > 0) {
                out += ' ';
            }
            append_double(out, corner(i, j));
        }
        out += '\n';
    }
    return out;
}

Heightmap Heightmap::import_text(const std::string& text) {
    std::istringstream in(text);
    int resolution = 0;
    double cell_size = 0.0;
    double amplitude = 0.0;
    double wavelength = 0.0;
    std::uint64_t seed = 0;
    if (!(in >> resolution >> cell_size >> amplitude >> wavelength >> seed)) {
        throw std::runtime_error("heightmap import: malformed header");
    }
    const auto n = static_cast<std::size_t>(resolution + 1);
    std::vector<double> corners(n * n);
    for (auto& h : corners) {
        if (!(in >> h)) {
            throw std::runtime_error("heightmap import: truncated height grid");
        }
    }
    return Heightmap(resolution, cell_size, std::move(corners), amplitude, wavelength, seed);
}

}  // namespace roboevo
