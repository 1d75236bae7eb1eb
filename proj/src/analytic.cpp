#include "hetnet/analytic.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hetnet::analytic {

namespace {

// Precomputed per-tier constants of the rate integrand.  `coef` folds the
// displaced-process intensity pi * lambda * E[Psi^{2/alpha}] * p^{2/alpha};
// multiplying by t^{2/alpha} and the attenuation kernel gives each tier's
// contribution to the exponents.
struct TierTerm {
    double coef;
    double two_over_alpha;
    double gamma_term;  // Gamma(1 - 2/alpha)
    double threshold;
    double alpha;
};

std::vector<TierTerm> tier_terms(const NetworkConfig& cfg, const ThresholdVector& thresholds) {
    cfg.validate();
    thresholds.validate(cfg.K());
    std::vector<TierTerm> terms;
    terms.reserve(cfg.K());
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        const auto& tier = cfg.tiers[k];
        const double s = 2.0 / tier.alpha;
        terms.push_back({std::numbers::pi * tier.lambda * tier.fading.frac_moment(s) *
                             std::pow(tier.p, s),
                         s, numerics::gamma_fn(1.0 - s), thresholds.T[k], tier.alpha});
    }
    return terms;
}

// Exponent of the interference Laplace transform.
double cooperative_exponent(const std::vector<TierTerm>& terms, double t) {
    double acc = 0.0;
    for (const auto& term : terms)
        acc += term.coef * std::pow(t, term.two_over_alpha) *
               numerics::z_function(t, term.threshold, term.alpha);
    return acc;
}

// Exponent of the threshold-free product of both Laplace transforms.
double total_exponent(const std::vector<TierTerm>& terms, double t) {
    double acc = 0.0;
    for (const auto& term : terms)
        acc += term.coef * std::pow(t, term.two_over_alpha) * term.gamma_term;
    return acc;
}

double rate_from_terms(const std::vector<TierTerm>& terms, double sigma2,
                       const numerics::QuadratureSpec& spec) {
    // Combined integrand: both exponential factors share the bounded
    // difference e^{-A} - e^{-B} with 0 <= A <= B, evaluated via expm1 so the
    // large-t regime where A -> B keeps precision.
    const auto integrand = [&terms, sigma2](double t) {
        const double coop = cooperative_exponent(terms, t);
        const double gap = total_exponent(terms, t) - coop;
        return -std::exp(-sigma2 * t - coop) * std::expm1(-gap) / t;
    };
    return numerics::integrate_semi_infinite(integrand, spec);
}

}  // namespace

double mean_cluster_size(const TierParams& tier, double T_k) {
    tier.validate();
    if (!std::isfinite(T_k) || T_k <= 0.0)
        throw std::domain_error("mean_cluster_size: threshold must be finite and positive");
    const double s = 2.0 / tier.alpha;
    return std::numbers::pi * tier.lambda * std::pow(tier.p / T_k, s) *
           tier.fading.frac_moment(s);
}

double cluster_power(const NetworkConfig& cfg, const ThresholdVector& thresholds) {
    cfg.validate();
    thresholds.validate(cfg.K());
    double acc = 0.0;
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        const auto& tier = cfg.tiers[k];
        acc += mean_cluster_size(tier, thresholds.T[k]) *
               (tier.P0 + tier.delta * tier.p + cfg.P_bh);
    }
    return acc;
}

double laplace_interference(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                            double t) {
    if (!std::isfinite(t) || t <= 0.0)
        throw std::domain_error("laplace_interference: t must be finite and positive");
    return std::exp(-cooperative_exponent(tier_terms(cfg, thresholds), t));
}

double laplace_serving(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                       double t) {
    if (!std::isfinite(t) || t <= 0.0)
        throw std::domain_error("laplace_serving: t must be finite and positive");
    const auto terms = tier_terms(cfg, thresholds);
    return std::exp(-(total_exponent(terms, t) - cooperative_exponent(terms, t)));
}

double spatial_average_rate(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                            const numerics::QuadratureSpec& spec) {
    return rate_from_terms(tier_terms(cfg, thresholds), cfg.sigma2, spec);
}

RateBreakdown rate_breakdown(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                             const numerics::QuadratureSpec& spec) {
    auto terms = std::make_shared<const std::vector<TierTerm>>(tier_terms(cfg, thresholds));
    RateBreakdown out;
    out.tau = rate_from_terms(*terms, cfg.sigma2, spec);
    out.laplace_serving = [terms](double t) {
        return std::exp(-(total_exponent(*terms, t) - cooperative_exponent(*terms, t)));
    };
    out.laplace_interference = [terms](double t) {
        return std::exp(-cooperative_exponent(*terms, t));
    };
    return out;
}

double energy_efficiency(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                         const numerics::QuadratureSpec& spec) {
    const double power = cluster_power(cfg, thresholds);
    if (!(power > 0.0))
        throw std::domain_error("energy_efficiency: mean cluster power is zero");
    return spatial_average_rate(cfg, thresholds, spec) / power;
}

}  // namespace hetnet::analytic
