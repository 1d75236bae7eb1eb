#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

namespace hetnet::optimizer {

// Per-tier interference scale of the displaced process:
// omega_k = pi * lambda_k * E[Psi^{2/alpha_k}] * p_k^{2/alpha_k} * Gamma(1 - 2/alpha_k).
struct OmegaVector {
    std::vector<double> omega;
};

OmegaVector omega(const NetworkConfig& cfg);

// Quadrature settings for the cross-tier interaction integral; tight so that
// downstream exponentiation keeps nine significant digits.
numerics::QuadratureSpec interaction_quadrature();

// Cross-tier interaction term for reference tier l (0-based):
// integral over t of [e^{-omega_l t^{2/alpha_l}} - e^{-sum_k omega_k t^{2/alpha_k}}] / t.
// Zero when K = 1.
double theta(const NetworkConfig& cfg, std::size_t l,
             const numerics::QuadratureSpec& spec = interaction_quadrature());

// Truncated two-tier series for the interaction term.  `l` reports which tier
// the series was anchored on (the roles swap when the first choice's expansion
// ratio is not below one); `converged` is false when neither anchoring has
// ratio < 1, in which case the partial sum is still returned best-effort.
struct TaylorInteraction {
    double value;
    std::size_t l;
    bool converged;
};

TaylorInteraction theta_taylor_two_tier(const NetworkConfig& cfg, int terms);

// Closed-form lower bound on the achievable rate at thresholds T; the
// optimizer treats it as the surrogate for the true rate constraint.
double rate_lower_bound(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                        std::optional<std::size_t> l = {});

// Lower bound on the last tier's threshold given the first K-1 thresholds,
// such that the surrogate rate still meets tau0.  Throws infeasible_error
// (carrying tau0_max) when no positive threshold can.
double threshold_lower_bound(const NetworkConfig& cfg,
                             const std::vector<double>& T_partial,
                             std::optional<std::size_t> l = {});

// Two-tier variant with the interaction term replaced by its truncated series.
double threshold_lower_bound_two_tier_closed(const NetworkConfig& cfg, double T_1,
                                             int terms);

// Largest rate requirement for which a positive last-tier threshold exists
// once the first K-1 thresholds are pinned.  Requires K >= 2.
double tau0_max(const NetworkConfig& cfg, const std::vector<double>& T_partial,
                std::optional<std::size_t> l = {});

using RateFn = std::function<double(const NetworkConfig&, const ThresholdVector&)>;

// Exact last-tier threshold: bisection on the interference-limited spatial
// average rate until it meets tau0 within rate_rel_tol (relative).  A custom
// rate function may be injected for testing.
double threshold_exact(const NetworkConfig& cfg, const std::vector<double>& T_partial,
                       double rate_rel_tol = 1e-6, const RateFn& rate = {});

// Specialization of threshold_lower_bound when every tier shares one path-loss
// exponent; fully closed-form.
double equal_alpha_lower_bound(const NetworkConfig& cfg,
                               const std::vector<double>& T_partial);

// Density regions of the last tier (shared path-loss exponent): the bound is
// nondecreasing in lambda_K above G1 and nonincreasing below (G1 - G2)+.
struct MonotonicityRegions {
    double G1;
    double G2;
};

MonotonicityRegions lambda_monotonicity_regions(const NetworkConfig& cfg,
                                                const std::vector<double>& T_partial);

struct OptimalThresholds {
    ThresholdVector thresholds;
    double residual;  // stationarity-system residual (rate residual in exact mode)
    double achieved_rate_lower_bound;
};

// Joint minimizer of mean cluster power subject to the surrogate rate
// constraint.  Thresholds of different tiers stay in the ratio of their
// per-BS powers; the shared one-dimensional root is solved in closed form
// when all exponents match and by bisection otherwise.
OptimalThresholds optimal_thresholds(const NetworkConfig& cfg);

// As above, then rescales the whole vector (ratios preserved) until the true
// interference-limited rate equals tau0.
OptimalThresholds optimal_thresholds_exact(const NetworkConfig& cfg,
                                           double rate_rel_tol = 1e-6);

namespace detail {
// General bisection path regardless of exponent structure; the closed-form
// dispatch in optimal_thresholds is validated against it.
OptimalThresholds solve_by_bisection(const NetworkConfig& cfg);
}  // namespace detail

}  // namespace hetnet::optimizer
