#pragma once

#include <functional>

#include "hetnet/model.hpp"
#include "hetnet/numerics.hpp"

namespace hetnet::analytic {

// Spatial average rate together with the Laplace transforms of the serving
// and interfering aggregate powers that produce it.
struct RateBreakdown {
    double tau = 0.0;
    std::function<double(double)> laplace_serving;    // t -> E[e^{-t J_S}]
    std::function<double(double)> laplace_interference;  // t -> E[e^{-t J_I}]
};

// Mean number of tier-k BSs inside the typical user's cooperative set.
double mean_cluster_size(const TierParams& tier, double T_k);

// Mean intra-cluster power drawn by all cooperating BSs:
// sum_k N_k * (P0_k + delta_k p_k + P_bh).
double cluster_power(const NetworkConfig& cfg, const ThresholdVector& thresholds);

// Laplace transform of the aggregate interference power at argument t.
double laplace_interference(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                            double t);

// Laplace transform of the aggregate serving (cooperative) power at t.
double laplace_serving(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                       double t);

// Spatial average rate E[ln(1 + SINR)] of the typical user, in nats/s/Hz.
double spatial_average_rate(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                            const numerics::QuadratureSpec& spec = {});

RateBreakdown rate_breakdown(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                             const numerics::QuadratureSpec& spec = {});

// Rate per watt of mean intra-cluster power.
double energy_efficiency(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                         const numerics::QuadratureSpec& spec = {});

}  // namespace hetnet::analytic
