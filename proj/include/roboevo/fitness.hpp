#pragma once

#include "roboevo/simulation.hpp"

namespace roboevo {

struct FitnessParams {
    double beta0 = 3.14159265358979323846 / 3.0;  // rad, target bearing in the spawn frame
    double epsilon = 1e-10;
    double penalty_coefficient = 0.01;            // 1/m; 0 disables the penalty
};

struct FitnessBreakdown {
    double dist_projection = 0.0;  // m, displacement along the target bearing
    double length_traj = 0.0;      // m, summed segment lengths
    double delta = 0.0;            // rad, angle between displacement and target
    double penalty = 0.0;
    double fitness = 0.0;
};

// Directed-locomotion score
//   f = |distProjection| / (lengthTraj + epsilon) * (distProjection / (delta + 1) - penalty)
// over the core (x,y) trajectory in the spawn frame. The penalty term is
// penalty_coefficient times the displacement component orthogonal to the
// target bearing; delta is defined as 0 for a zero displacement (the leading
// factor already zeroes the score). Throws std::invalid_argument with fewer
// than two samples.
FitnessBreakdown evaluate_directed(const Trajectory& trajectory, const FitnessParams& params);

}  // namespace roboevo
