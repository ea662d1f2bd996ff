#include "roboevo/fitness.hpp"

#include <cmath>
#include <stdexcept>

namespace roboevo {

FitnessBreakdown evaluate_directed(const Trajectory& trajectory, const FitnessParams& params) {
    if (trajectory.samples.size() < 2) {
        throw std::invalid_argument("evaluate_directed: trajectory needs at least two samples");
    }

    const auto& first = trajectory.samples.front();
    const auto& last = trajectory.samples.back();
    const double dx = last.x - first.x;
    const double dy = last.y - first.y;
    const double ux = std::cos(params.beta0);
    const double uy = std::sin(params.beta0);

    FitnessBreakdown breakdown;
    breakdown.dist_projection = dx * ux + dy * uy;

    for (std::size_t i = 1; i < trajectory.samples.size(); ++i) {
        const double sx = trajectory.samples[i].x - trajectory.samples[i - 1].x;
        const double sy = trajectory.samples[i].y - trajectory.samples[i - 1].y;
        breakdown.length_traj += std::sqrt(sx * sx + sy * sy);
    }

    const double displacement = std::sqrt(dx * dx + dy * dy);
    if (displacement > 0.0) {
        const double cosine =
            std::min(1.0, std::max(-1.0, breakdown.dist_projection / displacement));
        breakdown.delta = std::acos(cosine);
    }

    const double ortho_x = dx - breakdown.dist_projection * ux;
    const double ortho_y = dy - breakdown.dist_projection * uy;
    breakdown.penalty = params.penalty_coefficient * std::sqrt(ortho_x * ortho_x + ortho_y * ortho_y);

    breakdown.fitness = std::abs(breakdown.dist_projection) /
                        (breakdown.length_traj + params.epsilon) *
                        (breakdown.dist_projection / (breakdown.delta + 1.0) - breakdown.penalty);
    return breakdown;
}

}  // namespace roboevo
