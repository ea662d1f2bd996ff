#pragma once

#include <string>
#include <vector>

#include "roboevo/controller.hpp"
#include "roboevo/decoder.hpp"
#include "roboevo/terrain.hpp"

namespace roboevo {

struct SimConfig {
    double dt = 0.005;               // s
    double duration = 30.0;          // s, evaluation window
    double settle_duration = 2.0;    // s, controller-frozen pre-roll, not recorded
    double sample_period = 0.1;      // s between trajectory samples
    double gravity = 9.81;           // m/s^2
    double contact_stiffness = 5000.0;  // N/m
    double contact_damping = 50.0;      // N*s/m
    double friction = 0.8;
    double friction_v_eps = 0.01;    // m/s, below this friction acts viscously
    double joint_tracking_rate = 5.0;   // 1/s first-order lag toward targets
    double module_size = 0.05;       // m, cube edge
    double module_mass = 0.1;        // kg
    double actuator_stroke = 0.05;   // m
    double servo_range = 1.5707963267948966;  // rad, +-90 degrees
    double max_speed = 100.0;        // m/s instability threshold
    bool record_energy = false;      // keep per-step kinetic energy in the trajectory
};

struct RigidModuleState {
    Vec3 position;
    Vec3 velocity;
    Mat3 orientation;
    double joint_coordinate = 0.0;  // rad for hinges, m for linear actuators
};

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // first sample at t = 0, post-settle
    double start_x = 0.0;
    double start_y = 0.0;
    bool unstable = false;
    std::string diagnostic;
    long out_of_bounds_steps = 0;
    long cpg_clamp_events = 0;
    double max_penetration = 0.0;           // m, across all modules and steps
    std::vector<double> kinetic_energy;     // J per step, only with record_energy
};

// Reduced-order deterministic dynamics. The body is a kinematic tree of 5 cm
// cube modules hanging off a translating base frame: joint coordinates track
// the controller targets with a first-order lag, forward kinematics places
// every module, and the base integrates under gravity, penalty-spring ground
// contact, and regularized Coulomb friction. Contact damping and the viscous
// friction regime act on the new base velocity through a 3x3 implicit solve,
// which keeps the default stiffness/damping stable at the default dt. Module
// velocities above max_speed flag the trajectory unstable instead of throwing.
// When final_state is given it receives the per-module state after the last
// step, in grid traversal order.
Trajectory simulate(const BodyGraph& body, const BrainSpec& brain, const Heightmap& terrain,
                    const SimConfig& config, const CpgConfig& cpg_config = {},
                    std::vector<RigidModuleState>* final_state = nullptr);

std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace roboevo
