#include "hetnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "hetnet/rng.hpp"

namespace hetnet::sim {

void SimConfig::validate() const {
    if (!std::isfinite(window_side) || window_side <= 0.0)
        throw std::domain_error("sim: window_side must be positive");
    if (realizations < 1) throw std::domain_error("sim: need at least one realization");
    if (!std::isfinite(guard_radius) || guard_radius < 0.0 ||
        2.0 * guard_radius >= window_side)
        throw std::domain_error("sim: guard_radius must fit inside the window");
    for (double t : laplace_t_samples)
        if (!std::isfinite(t) || t < 0.0)
            throw std::domain_error("sim: Laplace probe points must be nonnegative");
}

std::vector<TierPoints> realize_network(const NetworkConfig& cfg, const SimConfig& sim,
                                        std::uint64_t realization_index) {
    cfg.validate();
    sim.validate();
    const double area = sim.window_side * sim.window_side;

    std::vector<TierPoints> out(cfg.K());
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        PhiloxStream rng(sim.seed, realization_index, static_cast<std::uint32_t>(k));
        const std::uint64_t n = rng.next_poisson(cfg.tiers[k].lambda * area);
        auto& tier = out[k];
        tier.x.reserve(n);
        tier.y.reserve(n);
        tier.fading.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            tier.x.push_back((rng.next_double() - 0.5) * sim.window_side);
            tier.y.push_back((rng.next_double() - 0.5) * sim.window_side);
            tier.fading.push_back(cfg.tiers[k].fading.sample(rng));
        }
    }
    return out;
}

std::vector<TierClusters> form_clusters(const NetworkConfig& cfg,
                                        const std::vector<TierPoints>& points,
                                        const ThresholdVector& thresholds) {
    cfg.validate();
    thresholds.validate(cfg.K());
    if (points.size() != cfg.K())
        throw std::domain_error("form_clusters: one point set per tier expected");

    std::vector<TierClusters> out(cfg.K());
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        const auto& tier = points[k];
        const double p = cfg.tiers[k].p;
        const double half_alpha = 0.5 * cfg.tiers[k].alpha;
        const double T = thresholds.T[k];
        auto& split = out[k];
        split.cooperative.assign(tier.size(), 0);
        for (std::size_t i = 0; i < tier.size(); ++i) {
            const double r2 = tier.x[i] * tier.x[i] + tier.y[i] * tier.y[i];
            const double received = p * tier.fading[i] * std::pow(r2, -half_alpha);
            if (received >= T) {
                split.cooperative[i] = 1;
                split.cluster_size += 1;
                split.serving_power += received;
            } else {
                split.interference_power += received;
            }
        }
    }
    return out;
}

double instantaneous_rate(const std::vector<TierClusters>& clusters, double sigma2) {
    double serving = 0.0;
    double interference = 0.0;
    for (const auto& split : clusters) {
        serving += split.serving_power;
        interference += split.interference_power;
    }
    if (serving <= 0.0) return 0.0;
    const double denom = interference + sigma2;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log1p(serving / denom);
}

namespace {

struct RealizationRow {
    double rate = 0.0;
    double power = 0.0;
    std::vector<double> cluster_size;
    std::vector<double> laplace_serving;
    std::vector<double> laplace_interference;
};

void check_window(const NetworkConfig& cfg, const SimConfig& sim,
                  const ThresholdVector& thresholds) {
    double max_radius = 0.0;
    for (std::size_t k = 0; k < cfg.K(); ++k)
        max_radius = std::max(max_radius, mean_radius(cfg.tiers[k], thresholds.T[k]));
    if (sim.window_side <= 4.0 * max_radius + 2.0 * sim.guard_radius)
        throw std::domain_error(
            "sim: window_side must exceed four times the largest mean cooperative "
            "radius (" +
            std::to_string(max_radius) + " m) plus the guard margin");
}

void mean_and_stderr(const std::vector<double>& values, double& mean, double& se) {
    const std::size_t n = values.size();
    double acc = 0.0;
    for (double v : values) acc += v;
    mean = acc / static_cast<double>(n);
    if (n < 2) {
        se = 0.0;
        return;
    }
    double ss = 0.0;
    for (double v : values) {
        const double d = v - mean;
        ss += d * d;
    }
    se = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

}  // namespace

SimOutcome run(const NetworkConfig& cfg, const SimConfig& sim,
               const ThresholdVector& thresholds) {
    cfg.validate();
    sim.validate();
    thresholds.validate(cfg.K());
    check_window(cfg, sim, thresholds);

    const std::size_t K = cfg.K();
    const std::size_t n = sim.realizations;
    const std::vector<double>& probes = sim.laplace_t_samples;
    std::vector<RealizationRow> rows(n);

    std::vector<double> per_bs_power(K);
    for (std::size_t k = 0; k < K; ++k)
        per_bs_power[k] =
            cfg.tiers[k].P0 + cfg.tiers[k].delta * cfg.tiers[k].p + cfg.P_bh;

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto points = realize_network(cfg, sim, i);
            const auto clusters = form_clusters(cfg, points, thresholds);
            auto& row = rows[i];
            row.rate = instantaneous_rate(clusters, cfg.sigma2);
            row.cluster_size.resize(K);
            double serving = 0.0, interference = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                row.cluster_size[k] = static_cast<double>(clusters[k].cluster_size);
                row.power += row.cluster_size[k] * per_bs_power[k];
                serving += clusters[k].serving_power;
                interference += clusters[k].interference_power;
            }
            row.laplace_serving.resize(probes.size());
            row.laplace_interference.resize(probes.size());
            for (std::size_t j = 0; j < probes.size(); ++j) {
                row.laplace_serving[j] = std::exp(-probes[j] * serving);
                row.laplace_interference[j] = std::exp(-probes[j] * interference);
            }
        }
    };

    unsigned n_threads = sim.n_threads == 0
                             ? std::max(1u, std::thread::hardware_concurrency())
                             : sim.n_threads;
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, n));
    if (n_threads <= 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::size_t chunk = (n + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t begin = static_cast<std::size_t>(t) * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    SimOutcome out;
    std::vector<double> scratch(n);

    for (std::size_t i = 0; i < n; ++i) scratch[i] = rows[i].rate;
    mean_and_stderr(scratch, out.tau_hat, out.tau_stderr);

    for (std::size_t i = 0; i < n; ++i) scratch[i] = rows[i].power;
    mean_and_stderr(scratch, out.power_hat, out.power_stderr);

    out.cluster_size_hat.resize(K);
    out.cluster_size_stderr.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < n; ++i) scratch[i] = rows[i].cluster_size[k];
        mean_and_stderr(scratch, out.cluster_size_hat[k], out.cluster_size_stderr[k]);
    }

    out.laplace_samples.resize(probes.size());
    for (std::size_t j = 0; j < probes.size(); ++j) {
        auto& sample = out.laplace_samples[j];
        sample.t = probes[j];
        double acc_s = 0.0, acc_i = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc_s += rows[i].laplace_serving[j];
            acc_i += rows[i].laplace_interference[j];
        }
        sample.serving = acc_s / static_cast<double>(n);
        sample.interference = acc_i / static_cast<double>(n);
    }
    return out;
}

}  // namespace hetnet::sim
