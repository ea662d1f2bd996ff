#include "roboevo/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace roboevo {

namespace {
constexpr double kInitialState = 0.70710678118654752440;  // sqrt(2)/2
}

CpgNetwork::CpgNetwork(const BrainSpec& brain, const CpgConfig& config)
    : kinds_(brain.joint_kinds),
      x_(brain.joint_kinds.size(), kInitialState),
      y_(brain.joint_kinds.size(), kInitialState),
      omega_(brain.joint_kinds.size(), config.omega),
      edges_(brain.edges),
      gain_(config.gain),
      clamp_(config.state_clamp) {}

JointTargets CpgNetwork::step(double dt) {
    if (!(dt > 0.0) || dt > 0.02) {
        throw std::invalid_argument("CpgNetwork::step: dt must be in (0, 0.02]");
    }

    const std::vector<double> x_old = x_;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        const double c = std::cos(omega_[i] * dt);
        const double s = std::sin(omega_[i] * dt);
        const double nx = c * x_[i] + s * y_[i];
        const double ny = -s * x_[i] + c * y_[i];
        x_[i] = nx;
        y_[i] = ny;
    }
    for (const auto& e : edges_) {
        x_[static_cast<std::size_t>(e.to)] += dt * e.weight * x_old[static_cast<std::size_t>(e.from)];
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (x_[i] > clamp_ || x_[i] < -clamp_) {
            x_[i] = std::min(clamp_, std::max(-clamp_, x_[i]));
            ++clamp_events_;
        }
        if (y_[i] > clamp_ || y_[i] < -clamp_) {
            y_[i] = std::min(clamp_, std::max(-clamp_, y_[i]));
            ++clamp_events_;
        }
    }
    return outputs();
}

JointTargets CpgNetwork::outputs() const {
    JointTargets targets;
    targets.values.reserve(kinds_.size());
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        const double squashed = std::tanh(gain_ * x_[i]);
        if (kinds_[i] == ModuleKind::LinearActuator) {
            targets.values.push_back((squashed + 1.0) / 2.0);
        } else {
            targets.values.push_back(squashed);
        }
    }
    return targets;
}

}  // namespace roboevo
