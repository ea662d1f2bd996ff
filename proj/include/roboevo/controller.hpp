#pragma once

#include <vector>

#include "roboevo/decoder.hpp"

namespace roboevo {

struct CpgConfig {
    double omega = 2.0 * 3.14159265358979323846;  // rad/s, 1 Hz gait
    double gain = 1.0;
    double state_clamp = 10.0;
};

// Per-joint actuation targets: hinges as an angle fraction in [-1,1] of the
// +-90 degree servo range, linear actuators as an extension fraction in [0,1].
struct JointTargets {
    std::vector<double> values;
};

// Network of coupled oscillators, one per active joint. Each oscillator keeps
// a state pair (x, y) that rotates at the intrinsic frequency; coupling feeds
// the neighbors' x states back into x. The output layer squashes x through
// tanh, which is what bounds every joint target.
class CpgNetwork {
public:
    CpgNetwork() = default;
    CpgNetwork(const BrainSpec& brain, const CpgConfig& config);

    // Advance one tick and produce targets. The harmonic part of the update is
    // an exact rotation of (x, y) by omega*dt, so an uncoupled oscillator
    // conserves x^2+y^2 to machine precision; the coupling term is added
    // explicitly from a snapshot of the previous x states. States are clamped
    // to +-state_clamp, counted in clamp_events. Requires 0 < dt <= 0.02.
    JointTargets step(double dt);

    JointTargets outputs() const;

    int size() const { return static_cast<int>(kinds_.size()); }
    double state_x(int i) const { return x_[static_cast<std::size_t>(i)]; }
    double state_y(int i) const { return y_[static_cast<std::size_t>(i)]; }
    long clamp_events() const { return clamp_events_; }

private:
    std::vector<ModuleKind> kinds_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> omega_;
    std::vector<CpgEdge> edges_;
    double gain_ = 1.0;
    double clamp_ = 10.0;
    long clamp_events_ = 0;
};

}  // namespace roboevo
