#pragma once

#include <cmath>
#include <compare>

namespace roboevo {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
};

// Integer grid cell. Ordered so it can key std::map.
struct IVec3 {
    int x = 0;
    int y = 0;
    int z = 0;

    auto operator<=>(const IVec3&) const = default;
    IVec3 operator+(const IVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    IVec3 operator-() const { return {-x, -y, -z}; }
};

inline int manhattan(const IVec3& a, const IVec3& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

// Orthonormal integer frame: the three local axes expressed in grid
// coordinates. fwd is the growth direction out of a module's front face.
struct GridFrame {
    IVec3 fwd{1, 0, 0};
    IVec3 left{0, 1, 0};
    IVec3 up{0, 0, 1};

    IVec3 apply(const IVec3& local) const {
        return {local.x * fwd.x + local.y * left.x + local.z * up.x,
                local.x * fwd.y + local.y * left.y + local.z * up.y,
                local.x * fwd.z + local.y * left.z + local.z * up.z};
    }

    // Yaw: rotate about local up so the new fwd points at the old
    // fwd/left/back/right depending on quarter-turns.
    GridFrame yawed(int quarter_turns) const {
        GridFrame f = *this;
        for (int i = 0; i < ((quarter_turns % 4) + 4) % 4; ++i) {
            const IVec3 old_fwd = f.fwd;
            f.fwd = f.left;
            f.left = -old_fwd;
        }
        return f;
    }

    // Pitch the frame so the old up axis becomes the new fwd axis.
    GridFrame pitched_up() const {
        GridFrame f = *this;
        const IVec3 old_fwd = f.fwd;
        f.fwd = f.up;
        f.up = -old_fwd;
        return f;
    }
};

// 3x3 rotation matrix (row-major) for simulation-side kinematics.
struct Mat3 {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return {}; }

    static Mat3 from_grid_frame(const GridFrame& f) {
        Mat3 r;
        r.m[0][0] = f.fwd.x;
        r.m[1][0] = f.fwd.y;
        r.m[2][0] = f.fwd.z;
        r.m[0][1] = f.left.x;
        r.m[1][1] = f.left.y;
        r.m[2][1] = f.left.z;
        r.m[0][2] = f.up.x;
        r.m[1][2] = f.up.y;
        r.m[2][2] = f.up.z;
        return r;
    }

    // Rodrigues rotation about a unit axis.
    static Mat3 axis_angle(const Vec3& axis, double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double t = 1.0 - c;
        const double x = axis.x, y = axis.y, z = axis.z;
        Mat3 r;
        r.m[0][0] = t * x * x + c;
        r.m[0][1] = t * x * y - s * z;
        r.m[0][2] = t * x * z + s * y;
        r.m[1][0] = t * x * y + s * z;
        r.m[1][1] = t * y * y + c;
        r.m[1][2] = t * y * z - s * x;
        r.m[2][0] = t * x * z - s * y;
        r.m[2][1] = t * y * z + s * x;
        r.m[2][2] = t * z * z + c;
        return r;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
            }
        }
        return r;
    }
};

}  // namespace roboevo
