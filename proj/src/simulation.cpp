#include "roboevo/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace roboevo {

namespace {

struct SimModule {
    ModuleKind kind = ModuleKind::Core;
    int parent = -1;
    Vec3 attach_translation;   // parent-local, meters
    Mat3 attach_rotation;      // parent local frame -> module local frame
    int joint = -1;            // index into the joint arrays, -1 if passive
};

struct AssembledRobot {
    std::vector<SimModule> modules;  // parents precede children
    std::vector<ModuleKind> joint_kinds;
};

Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = a.m[j][i];
        }
    }
    return r;
}

double component(const Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

AssembledRobot assemble(const BodyGrid& grid, const BrainSpec& brain, const SimConfig& config) {
    AssembledRobot robot;
    robot.modules.resize(grid.modules.size());
    for (std::size_t i = 0; i < grid.modules.size(); ++i) {
        const PlacedModule& placed = grid.modules[i];
        SimModule& mod = robot.modules[i];
        mod.kind = placed.kind;
        mod.parent = placed.parent;
        if (placed.parent >= 0) {
            const PlacedModule& parent = grid.modules[static_cast<std::size_t>(placed.parent)];
            const IVec3 dir = slot_direction(parent.kind, placed.parent_slot);
            mod.attach_translation = Vec3{static_cast<double>(dir.x), static_cast<double>(dir.y),
                                          static_cast<double>(dir.z)} *
                                     config.module_size;
            // Relative rotation: parent frame transposed times child frame.
            mod.attach_rotation = transpose(Mat3::from_grid_frame(parent.frame)) *
                                  Mat3::from_grid_frame(placed.frame);
        }
    }
    robot.joint_kinds = brain.joint_kinds;
    for (std::size_t j = 0; j < brain.joint_modules.size(); ++j) {
        robot.modules[static_cast<std::size_t>(brain.joint_modules[j])].joint = static_cast<int>(j);
    }
    return robot;
}

// Module offsets relative to the base frame for the given joint coordinates.
// A hinge swings everything on its child slot about its own center; a linear
// actuator translates its children along its local forward axis.
void forward_kinematics(const AssembledRobot& robot, const std::vector<double>& q,
                        std::vector<Vec3>& offsets, std::vector<Mat3>& orientations) {
    const std::size_t n = robot.modules.size();
    offsets.resize(n);
    orientations.resize(n);
    offsets[0] = Vec3{};
    orientations[0] = Mat3::identity();
    for (std::size_t i = 1; i < n; ++i) {
        const SimModule& mod = robot.modules[i];
        const auto p = static_cast<std::size_t>(mod.parent);
        const SimModule& parent = robot.modules[p];
        Vec3 local = mod.attach_translation;
        Mat3 joint_rot = Mat3::identity();
        if (parent.joint >= 0) {
            const double jq = q[static_cast<std::size_t>(parent.joint)];
            switch (parent.kind) {
                case ModuleKind::HingeHorizontal:
                    joint_rot = Mat3::axis_angle({0.0, 1.0, 0.0}, jq);
                    local = joint_rot * local;
                    break;
                case ModuleKind::HingeVertical:
                    joint_rot = Mat3::axis_angle({0.0, 0.0, 1.0}, jq);
                    local = joint_rot * local;
                    break;
                case ModuleKind::LinearActuator:
                    local += Vec3{jq, 0.0, 0.0};
                    break;
                default:
                    break;
            }
        }
        offsets[i] = offsets[p] + orientations[p] * local;
        orientations[i] = orientations[p] * joint_rot * mod.attach_rotation;
    }
}

// Solve the symmetric positive definite 3x3 system A v = b (Cramer's rule).
Vec3 solve3(const double a[3][3], const Vec3& b) {
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    const double inv = 1.0 / det;
    Vec3 v;
    v.x = inv * (b.x * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (b.y * a[2][2] - a[1][2] * b.z) +
                 a[0][2] * (b.y * a[2][1] - a[1][1] * b.z));
    v.y = inv * (a[0][0] * (b.y * a[2][2] - a[1][2] * b.z) -
                 b.x * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * b.z - b.y * a[2][0]));
    v.z = inv * (a[0][0] * (a[1][1] * b.z - b.y * a[2][1]) -
                 a[0][1] * (a[1][0] * b.z - b.y * a[2][0]) +
                 b.x * (a[1][0] * a[2][1] - a[1][1] * a[2][0]));
    return v;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

Trajectory simulate(const BodyGraph& body, const BrainSpec& brain, const Heightmap& terrain,
                    const SimConfig& config, const CpgConfig& cpg_config,
                    std::vector<RigidModuleState>* final_state) {
    if (!(config.dt > 0.0) || !(config.duration > 0.0) || !(config.gravity > 0.0) ||
        !(config.contact_stiffness > 0.0) || !(config.contact_damping > 0.0) ||
        !(config.module_mass > 0.0) || !(config.module_size > 0.0)) {
        throw std::invalid_argument("simulate: invalid configuration");
    }
    const double steps_exact = config.duration / config.dt;
    const long steps = std::lround(steps_exact);
    if (std::abs(steps_exact - static_cast<double>(steps)) > 1e-6) {
        throw std::invalid_argument("simulate: duration must be an integral number of steps");
    }
    const long settle_steps = std::lround(config.settle_duration / config.dt);
    const long steps_per_sample = std::max(1L, std::lround(config.sample_period / config.dt));

    const BodyGrid grid = to_grid(body);
    for (const int index : brain.joint_modules) {
        if (index < 0 || index >= static_cast<int>(grid.modules.size()) ||
            !is_joint(grid.modules[static_cast<std::size_t>(index)].kind)) {
            throw std::invalid_argument("simulate: brain does not match the body's joints");
        }
    }
    const AssembledRobot robot = assemble(grid, brain, config);
    const std::size_t module_count = robot.modules.size();
    const double half = config.module_size / 2.0;
    const double total_mass = config.module_mass * static_cast<double>(module_count);

    CpgNetwork network(brain, cpg_config);
    std::vector<double> q(robot.joint_kinds.size(), 0.0);
    const double lag = 1.0 - std::exp(-config.joint_tracking_rate * config.dt);

    std::vector<Vec3> offsets;
    std::vector<Mat3> orientations;
    forward_kinematics(robot, q, offsets, orientations);

    // Spawn resting on the terrain: the lowest module face touches the surface.
    Vec3 base{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < module_count; ++i) {
        const double ground = terrain.height_at(offsets[i].x, offsets[i].y);
        base.z = std::max(base.z, ground + half - offsets[i].z);
    }
    Vec3 velocity{};

    std::vector<Vec3> prev_offsets = offsets;
    std::vector<Vec3> joint_vels(module_count);
    Trajectory trajectory;

    const auto physics_step = [&](bool count_stats) -> bool {
        forward_kinematics(robot, q, offsets, orientations);
        for (std::size_t i = 0; i < module_count; ++i) {
            joint_vels[i] = (offsets[i] - prev_offsets[i]) * (1.0 / config.dt);
        }

        Vec3 force{0.0, 0.0, -config.gravity * total_mass};
        double damping[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        bool out_of_bounds = false;

        for (std::size_t i = 0; i < module_count; ++i) {
            const Vec3 pos = base + offsets[i];
            if (!terrain.in_bounds(pos.x, pos.y)) {
                out_of_bounds = true;
            }
            const double ground = terrain.height_at(pos.x, pos.y);
            const double penetration = ground - (pos.z - half);
            if (penetration <= 0.0) {
                continue;
            }
            if (count_stats) {
                trajectory.max_penetration = std::max(trajectory.max_penetration, penetration);
            }
            const Vec3 n = terrain.normal_at(pos.x, pos.y);
            const Vec3 v_est = velocity + joint_vels[i];
            const double v_n = v_est.dot(n);

            force += n * (config.contact_stiffness * penetration);
            // Normal damping goes into the implicit matrix; the share caused
            // by joint motion is a known bias force.
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) {
                    damping[r][c] += config.contact_damping * component(n, r) * component(n, c);
                }
            }
            force += n * (-config.contact_damping * joint_vels[i].dot(n));

            const double normal_force = std::max(
                0.0, config.contact_stiffness * penetration - config.contact_damping * v_n);
            const Vec3 v_t = v_est - n * v_n;
            const double v_t_mag = v_t.norm();
            if (v_t_mag > config.friction_v_eps) {
                force += v_t * (-config.friction * normal_force / v_t_mag);
            } else if (normal_force > 0.0) {
                // Creeping contact: friction acts viscously with coefficient
                // mu*N/v_eps, handled implicitly like the normal damping.
                const double coeff = config.friction * normal_force / config.friction_v_eps;
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 3; ++c) {
                        const double tangential =
                            (r == c ? 1.0 : 0.0) - component(n, r) * component(n, c);
                        damping[r][c] += coeff * tangential;
                    }
                }
                const Vec3 joint_t = joint_vels[i] - n * joint_vels[i].dot(n);
                force += joint_t * (-coeff);
            }
        }

        double a[3][3];
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                a[r][c] = (r == c ? total_mass : 0.0) + config.dt * damping[r][c];
            }
        }
        velocity = solve3(a, velocity * total_mass + force * config.dt);
        base += velocity * config.dt;

        if (count_stats && out_of_bounds) {
            ++trajectory.out_of_bounds_steps;
        }
        double max_speed = 0.0;
        double ke = 0.0;
        for (std::size_t i = 0; i < module_count; ++i) {
            const Vec3 v = velocity + joint_vels[i];
            max_speed = std::max(max_speed, v.norm());
            ke += 0.5 * config.module_mass * v.dot(v);
        }
        if (config.record_energy && count_stats) {
            trajectory.kinetic_energy.push_back(ke);
        }
        prev_offsets = offsets;
        return max_speed <= config.max_speed;
    };

    // Controller-frozen settle; excluded from the recorded trajectory.
    for (long i = 0; i < settle_steps; ++i) {
        if (!physics_step(false)) {
            trajectory.unstable = true;
            trajectory.diagnostic = "speed limit exceeded during settle";
            return trajectory;
        }
    }

    trajectory.start_x = base.x;
    trajectory.start_y = base.y;
    trajectory.samples.push_back({0.0, base.x, base.y});

    for (long i = 0; i < steps; ++i) {
        const JointTargets targets = network.step(config.dt);
        for (std::size_t j = 0; j < q.size(); ++j) {
            const double target = robot.joint_kinds[j] == ModuleKind::LinearActuator
                                      ? targets.values[j] * config.actuator_stroke
                                      : targets.values[j] * config.servo_range;
            q[j] += (target - q[j]) * lag;
        }
        if (!physics_step(true)) {
            trajectory.unstable = true;
            trajectory.diagnostic =
                "speed limit exceeded at t=" + std::to_string((i + 1) * config.dt);
            trajectory.cpg_clamp_events = network.clamp_events();
            return trajectory;
        }
        if ((i + 1) % steps_per_sample == 0) {
            trajectory.samples.push_back({static_cast<double>(i + 1) * config.dt, base.x, base.y});
        }
    }
    trajectory.cpg_clamp_events = network.clamp_events();

    if (final_state != nullptr) {
        final_state->resize(module_count);
        for (std::size_t i = 0; i < module_count; ++i) {
            RigidModuleState& state = (*final_state)[i];
            state.position = base + offsets[i];
            state.velocity = velocity + joint_vels[i];
            state.orientation = orientations[i];
            const int joint = robot.modules[i].joint;
            state.joint_coordinate = joint >= 0 ? q[static_cast<std::size_t>(joint)] : 0.0;
        }
    }
    return trajectory;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "t,x,y\n";
    for (const auto& s : trajectory.samples) {
        append_double(out, s.t);
        out += ',';
        append_double(out, s.x);
        out += ',';
        append_double(out, s.y);
        out += '\n';
    }
    return out;
}

}  // namespace roboevo
