#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

namespace hetnet::geometric {

// Distance-only clustering baseline: every BS of tier k within a fixed radius
// R_k of the user cooperates, regardless of its fading state.  Closed-form
// results exist only for exponential fading, and only at the optimum.

// Rate constant per tier, (2 pi^2 / alpha) csc(2 pi / alpha) lambda (p mu)^{2/alpha}
// with mu the tier's mean fading gain.  Throws std::domain_error unless every
// tier uses exponential fading with alpha > 2.1 (csc pole at alpha = 2).
std::vector<double> omega_tilde(const NetworkConfig& cfg);

numerics::QuadratureSpec interaction_quadrature();

// Tier-interaction constant of the distance-based bound, same integral shape as
// optimizer::theta but driven by omega_tilde.
double theta_tilde(const NetworkConfig& cfg, std::size_t l,
                   const numerics::QuadratureSpec& spec = interaction_quadrature());

// Right-hand side of the per-tier radius equation; independent of the
// reference tier l up to quadrature error.
double requirement_constant(const NetworkConfig& cfg,
                            std::optional<std::size_t> l = std::nullopt);

struct GeometricOptimum {
    std::vector<double> R_star;  // cooperative radius per tier, m
    double P_cl_tilde = 0.0;     // minimum mean cluster power, W
    double residual = 0.0;       // worst per-tier equation mismatch, relative
};

// Solves the per-tier radius equations (scalar monotone root-finds sharing one
// requirement constant) and evaluates the resulting mean cluster power.
GeometricOptimum optimal_radii(const NetworkConfig& cfg);

}  // namespace hetnet::geometric
