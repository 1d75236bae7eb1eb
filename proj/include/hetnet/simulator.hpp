#pragma once

#include <cstdint>
#include <vector>

#include "hetnet/model.hpp"

namespace hetnet::sim {

struct SimConfig {
    double window_side = 10000.0;  // m; user sits at the window centre
    std::size_t realizations = 10000;
    std::uint64_t seed = 1;
    double guard_radius = 0.0;  // extra margin demanded between user and edge, m
    unsigned n_threads = 1;     // 0 = hardware concurrency
    std::vector<double> laplace_t_samples;  // optional probe points, 1/W

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

// One tier's realization: BS coordinates relative to the user plus the fading
// draw towards the user, in draw order x, y, fading per point.
struct TierPoints {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> fading;

    std::size_t size() const noexcept { return x.size(); }
};

std::vector<TierPoints> realize_network(const NetworkConfig& cfg, const SimConfig& sim,
                                        std::uint64_t realization_index);

struct TierClusters {
    std::vector<std::uint8_t> cooperative;  // parallel to the tier's points
    std::size_t cluster_size = 0;
    double serving_power = 0.0;       // W, summed over cooperating BSs
    double interference_power = 0.0;  // W, summed over the rest
};

// Splits every tier by the received-signal-strength rule p*Psi*r^-alpha >= T.
std::vector<TierClusters> form_clusters(const NetworkConfig& cfg,
                                        const std::vector<TierPoints>& points,
                                        const ThresholdVector& thresholds);

// ln(1 + S / (I + sigma2)); an empty cooperative set gives 0.
double instantaneous_rate(const std::vector<TierClusters>& clusters, double sigma2);

struct LaplaceSample {
    double t = 0.0;
    double serving = 0.0;       // empirical E[exp(-t * serving power)]
    double interference = 0.0;  // empirical E[exp(-t * interference power)]
};

struct SimOutcome {
    double tau_hat = 0.0;  // nats/s/Hz
    double tau_stderr = 0.0;
    std::vector<double> cluster_size_hat;  // per tier
    std::vector<double> cluster_size_stderr;
    double power_hat = 0.0;  // W, mean cluster power draw
    double power_stderr = 0.0;
    std::vector<LaplaceSample> laplace_samples;
};

// Full Monte Carlo pass.  Bit-identical output for a fixed seed regardless of
// n_threads; realizations are striped over counter-based RNG streams and
// reduced in index order.
SimOutcome run(const NetworkConfig& cfg, const SimConfig& sim,
               const ThresholdVector& thresholds);

}  // namespace hetnet::sim
