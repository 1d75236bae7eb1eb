#include "hetnet/geometric.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hetnet/errors.hpp"
#include "hetnet/optimizer.hpp"

namespace hetnet::geometric {

namespace {

constexpr double kEuler = numerics::euler_constant;
constexpr double kMinExponent = 2.1;

void require_exponential(const NetworkConfig& cfg) {
    for (const auto& tier : cfg.tiers) {
        if (tier.fading.kind() != FadingModel::Kind::exponential)
            throw std::domain_error(
                "geometric model: every tier needs exponential fading");
        if (tier.alpha <= kMinExponent)
            throw std::domain_error(
                "geometric model: path-loss exponents must exceed " +
                std::to_string(kMinExponent));
    }
}

double per_bs_power(const NetworkConfig& cfg, std::size_t k) {
    const auto& tier = cfg.tiers[k];
    return tier.P0 + tier.delta * tier.p + cfg.P_bh;
}

}  // namespace

numerics::QuadratureSpec interaction_quadrature() {
    return {1e-12, 1e-14, 8000};
}

std::vector<double> omega_tilde(const NetworkConfig& cfg) {
    cfg.validate();
    require_exponential(cfg);
    std::vector<double> out;
    out.reserve(cfg.K());
    for (const auto& tier : cfg.tiers) {
        const double mu = tier.fading.param();
        const double angle = 2.0 * std::numbers::pi / tier.alpha;
        out.push_back(2.0 * std::numbers::pi * std::numbers::pi / tier.alpha /
                      std::sin(angle) * tier.lambda *
                      std::pow(tier.p * mu, 2.0 / tier.alpha));
    }
    return out;
}

double theta_tilde(const NetworkConfig& cfg, std::size_t l,
                   const numerics::QuadratureSpec& spec) {
    if (l >= cfg.K()) throw std::domain_error("theta_tilde: tier index out of range");
    const auto om = omega_tilde(cfg);
    if (cfg.K() == 1) return 0.0;

    std::vector<double> exps;
    exps.reserve(cfg.K());
    for (const auto& tier : cfg.tiers) exps.push_back(2.0 / tier.alpha);

    const auto integrand = [&om, &exps, l](double t) {
        double own = om[l] * std::pow(t, exps[l]);
        double rest = 0.0;
        for (std::size_t k = 0; k < om.size(); ++k)
            if (k != l) rest += om[k] * std::pow(t, exps[k]);
        return -std::exp(-own) * std::expm1(-rest) / t;
    };
    return numerics::integrate_semi_infinite(integrand, spec);
}

double requirement_constant(const NetworkConfig& cfg, std::optional<std::size_t> l_opt) {
    cfg.validate();
    require_exponential(cfg);
    const auto om = omega_tilde(cfg);
    const std::size_t K = cfg.K();

    std::size_t l;
    if (l_opt) {
        if (*l_opt >= K)
            throw std::domain_error("requirement_constant: tier index out of range");
        l = *l_opt;
    } else {
        l = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            const double v = 0.5 * cfg.tiers[k].alpha * std::log(om[k]);
            if (v > best) {
                best = v;
                l = k;
            }
        }
    }

    const auto& last = cfg.tiers[K - 1];
    const double alpha_l = cfg.tiers[l].alpha;
    const double D = std::pow(om[l], 0.5 * alpha_l) * (last.alpha - 2.0) /
                     (2.0 * std::numbers::pi * last.lambda * last.p * last.fading.param());
    return D * std::exp(0.5 * (alpha_l - 2.0) * kEuler + theta_tilde(cfg, l) - cfg.tau0);
}

GeometricOptimum optimal_radii(const NetworkConfig& cfg) {
    cfg.validate();
    require_exponential(cfg);
    const std::size_t K = cfg.K();
    const auto& last = cfg.tiers[K - 1];
    const double last_gain = last.p * last.fading.param() * last.lambda;

    std::vector<double> B(K), beta(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto& tier = cfg.tiers[k];
        beta[k] = (tier.alpha - 2.0) / tier.alpha;
        B[k] = (last.alpha - 2.0) * tier.p * tier.fading.param() * tier.lambda /
               ((tier.alpha - 2.0) * last_gain);
    }
    const double rhs = requirement_constant(cfg);

    GeometricOptimum out;
    out.R_star.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double alpha_k = cfg.tiers[k].alpha;
        const double power_k = per_bs_power(cfg, k);
        const double gain_k = cfg.tiers[k].p * cfg.tiers[k].fading.param();
        const auto lhs_at = [&](double R) {
            double acc = 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                const double gain_j = cfg.tiers[j].p * cfg.tiers[j].fading.param();
                const double coupling = per_bs_power(cfg, j) * gain_k /
                                        (power_k * gain_j);
                acc += B[j] * std::pow(coupling, beta[j]) *
                       std::pow(R, -alpha_k * beta[j]);
            }
            return acc;
        };

        // lhs is strictly decreasing from +inf to 0, so a root always exists
        double lo = 1e-6, hi = 1e6;
        int guard = 0;
        while (lhs_at(lo) < rhs && ++guard < 60) lo *= 0.25;
        while (lhs_at(hi) > rhs && ++guard < 120) hi *= 4.0;
        if (guard >= 120 || !(lhs_at(lo) >= rhs && lhs_at(hi) <= rhs))
            throw numeric_error("optimal_radii: radius root not bracketed");
        for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-14; ++it) {
            const double mid = std::sqrt(lo * hi);
            (lhs_at(mid) > rhs ? lo : hi) = mid;
        }
        out.R_star[k] = std::sqrt(lo * hi);
        out.residual = std::max(out.residual,
                                std::fabs(lhs_at(out.R_star[k]) - rhs) / rhs);
    }

    for (std::size_t k = 0; k < K; ++k)
        out.P_cl_tilde += std::numbers::pi * cfg.tiers[k].lambda * out.R_star[k] *
                          out.R_star[k] * per_bs_power(cfg, k);
    return out;
}

}  // namespace hetnet::geometric
