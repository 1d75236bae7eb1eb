#include "hetnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"

namespace hetnet::optimizer {

namespace {

constexpr double kEuler = numerics::euler_constant;

bool equal_exponents(const NetworkConfig& cfg) {
    for (const auto& tier : cfg.tiers)
        if (tier.alpha != cfg.tiers.front().alpha) return false;
    return true;
}

std::size_t pick_reference_tier(const std::vector<double>& om, const NetworkConfig& cfg) {
    // the tier whose omega_l^{alpha_l/2} dominates gives the best-conditioned bound
    std::size_t best = 0;
    double best_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < om.size(); ++k) {
        const double v = 0.5 * cfg.tiers[k].alpha * std::log(om[k]);
        if (v > best_log) {
            best_log = v;
            best = k;
        }
    }
    return best;
}

std::size_t resolve_reference(const NetworkConfig& cfg, const std::vector<double>& om,
                              std::optional<std::size_t> l) {
    if (!l) return pick_reference_tier(om, cfg);
    if (*l >= cfg.K())
        throw std::domain_error("reference tier index out of range");
    return *l;
}

// Shared constants of the surrogate rate bound for a given reference tier.
struct BoundContext {
    std::vector<double> om;
    std::vector<double> B;        // per-tier weights, last entry 1
    std::vector<double> beta;     // (alpha_k - 2) / alpha_k
    double D;                     // reference-tier scale
    double theta_l;
    std::size_t l;
    double rhs;                   // D * exp((alpha_l-2)/2*C + theta_l - tau0)
};

BoundContext bound_context(const NetworkConfig& cfg, std::optional<std::size_t> l_opt) {
    cfg.validate();
    const std::size_t K = cfg.K();
    BoundContext ctx;
    ctx.om = omega(cfg).omega;
    ctx.l = resolve_reference(cfg, ctx.om, l_opt);

    const double alpha_K = cfg.tiers[K - 1].alpha;
    const double gamma_K = numerics::gamma_fn(1.0 - 2.0 / alpha_K);
    ctx.B.resize(K);
    ctx.beta.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double alpha_k = cfg.tiers[k].alpha;
        ctx.beta[k] = (alpha_k - 2.0) / alpha_k;
        ctx.B[k] = (alpha_K - 2.0) * gamma_K * ctx.om[k] /
                   ((alpha_k - 2.0) * numerics::gamma_fn(1.0 - 2.0 / alpha_k) *
                    ctx.om[K - 1]);
    }
    const double alpha_l = cfg.tiers[ctx.l].alpha;
    ctx.D = (alpha_K - 2.0) * gamma_K * std::pow(ctx.om[ctx.l], 0.5 * alpha_l) /
            (2.0 * ctx.om[K - 1]);
    ctx.theta_l = theta(cfg, ctx.l);
    ctx.rhs = ctx.D * std::exp(0.5 * (alpha_l - 2.0) * kEuler + ctx.theta_l - cfg.tau0);
    return ctx;
}

void check_partial(const NetworkConfig& cfg, const std::vector<double>& T_partial) {
    if (T_partial.size() + 1 != cfg.K())
        throw std::domain_error("expected one pinned threshold per tier except the last");
    for (double v : T_partial)
        if (!std::isfinite(v) || v <= 0.0)
            throw std::domain_error("pinned thresholds must be finite and positive");
}

double pinned_sum(const BoundContext& ctx, const std::vector<double>& T_partial) {
    double acc = 0.0;
    for (std::size_t k = 0; k < T_partial.size(); ++k)
        acc += ctx.B[k] * std::pow(T_partial[k], ctx.beta[k]);
    return acc;
}

double ceiling_from_context(const NetworkConfig& cfg, const BoundContext& ctx,
                            double pinned) {
    const double alpha_l = cfg.tiers[ctx.l].alpha;
    return 0.5 * (alpha_l - 2.0) * kEuler + ctx.theta_l - std::log(pinned / ctx.D);
}

double default_rate(const NetworkConfig& cfg, const ThresholdVector& thresholds) {
    NetworkConfig quiet = cfg;
    quiet.sigma2 = 0.0;
    return analytic::spatial_average_rate(quiet, thresholds);
}

}  // namespace

OmegaVector omega(const NetworkConfig& cfg) {
    cfg.validate();
    OmegaVector out;
    out.omega.reserve(cfg.K());
    for (const auto& tier : cfg.tiers) {
        const double s = 2.0 / tier.alpha;
        out.omega.push_back(std::numbers::pi * tier.lambda * tier.fading.frac_moment(s) *
                            std::pow(tier.p, s) * numerics::gamma_fn(1.0 - s));
    }
    return out;
}

numerics::QuadratureSpec interaction_quadrature() {
    return {1e-12, 1e-14, 8000};
}

double theta(const NetworkConfig& cfg, std::size_t l, const numerics::QuadratureSpec& spec) {
    cfg.validate();
    if (l >= cfg.K()) throw std::domain_error("theta: reference tier index out of range");
    if (cfg.K() == 1) return 0.0;

    const auto om = omega(cfg).omega;
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

TaylorInteraction theta_taylor_two_tier(const NetworkConfig& cfg, int terms) {
    cfg.validate();
    if (cfg.K() != 2)
        throw std::domain_error("theta_taylor_two_tier: exactly two tiers required");
    if (terms < 1) throw std::domain_error("theta_taylor_two_tier: need at least one term");

    const auto om = omega(cfg).omega;
    const auto ratio_for = [&](std::size_t l) {
        const std::size_t j = 1 - l;
        return om[j] * std::pow(om[l], -cfg.tiers[l].alpha / cfg.tiers[j].alpha);
    };

    std::size_t l = 1;
    bool converged = true;
    if (ratio_for(1) >= 1.0) {
        if (ratio_for(0) < 1.0) {
            l = 0;
        } else {
            l = ratio_for(0) < ratio_for(1) ? 0 : 1;
            converged = false;
        }
    }

    const std::size_t j = 1 - l;
    const double r = ratio_for(l);
    const double c = cfg.tiers[l].alpha / cfg.tiers[j].alpha;
    const double log_r = std::log(r);
    double sum = 0.0;
    for (int n = 1; n <= terms; ++n) {
        const double magnitude =
            std::exp(n * log_r + numerics::log_gamma(c * n) - numerics::log_gamma(n + 1.0));
        sum += (n % 2 == 1) ? magnitude : -magnitude;
    }
    return {0.5 * cfg.tiers[l].alpha * sum, l, converged};
}

double rate_lower_bound(const NetworkConfig& cfg, const ThresholdVector& thresholds,
                        std::optional<std::size_t> l_opt) {
    cfg.validate();
    thresholds.validate(cfg.K());
    const auto om = omega(cfg).omega;
    const std::size_t l = resolve_reference(cfg, om, l_opt);

    double rho = 0.0;
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        const auto& tier = cfg.tiers[k];
        const double s = 2.0 / tier.alpha;
        rho += 2.0 * std::numbers::pi * tier.lambda * tier.fading.frac_moment(s) *
               std::pow(tier.p, s) * std::pow(thresholds.T[k], (tier.alpha - 2.0) / tier.alpha) /
               (tier.alpha - 2.0);
    }
    const double alpha_l = cfg.tiers[l].alpha;
    return 0.5 * (alpha_l - 2.0) * kEuler + theta(cfg, l) +
           0.5 * alpha_l * std::log(om[l]) - std::log(rho);
}

double threshold_lower_bound(const NetworkConfig& cfg, const std::vector<double>& T_partial,
                             std::optional<std::size_t> l_opt) {
    cfg.validate();
    check_partial(cfg, T_partial);
    const BoundContext ctx = bound_context(cfg, l_opt);
    const double inner = ctx.rhs - pinned_sum(ctx, T_partial);
    if (!(inner > 0.0)) {
        const double ceiling = ceiling_from_context(cfg, ctx, pinned_sum(ctx, T_partial));
        throw infeasible_error(
            "threshold_lower_bound: requirement tau0 = " + std::to_string(cfg.tau0) +
                " infeasible for the pinned thresholds; achievable ceiling is " +
                std::to_string(ceiling),
            ceiling);
    }
    const double alpha_K = cfg.tiers[cfg.K() - 1].alpha;
    return std::pow(inner, alpha_K / (alpha_K - 2.0));
}

double threshold_lower_bound_two_tier_closed(const NetworkConfig& cfg, double T_1,
                                             int terms) {
    cfg.validate();
    if (cfg.K() != 2)
        throw std::domain_error(
            "threshold_lower_bound_two_tier_closed: exactly two tiers required");
    if (!std::isfinite(T_1) || T_1 <= 0.0)
        throw std::domain_error(
            "threshold_lower_bound_two_tier_closed: pinned threshold must be positive");

    const TaylorInteraction approx = theta_taylor_two_tier(cfg, terms);
    const auto om = omega(cfg).omega;
    const double alpha_K = cfg.tiers[1].alpha;
    const double gamma_K = numerics::gamma_fn(1.0 - 2.0 / alpha_K);
    const double alpha_l = cfg.tiers[approx.l].alpha;
    const double D = (alpha_K - 2.0) * gamma_K * std::pow(om[approx.l], 0.5 * alpha_l) /
                     (2.0 * om[1]);
    const double alpha_1 = cfg.tiers[0].alpha;
    const double B_1 = (alpha_K - 2.0) * gamma_K * om[0] /
                       ((alpha_1 - 2.0) * numerics::gamma_fn(1.0 - 2.0 / alpha_1) * om[1]);
    const double rhs =
        D * std::exp(0.5 * (alpha_l - 2.0) * kEuler + approx.value - cfg.tau0);
    const double inner = rhs - B_1 * std::pow(T_1, (alpha_1 - 2.0) / alpha_1);
    if (!(inner > 0.0)) {
        const double ceiling = 0.5 * (alpha_l - 2.0) * kEuler + approx.value -
                               std::log(B_1 * std::pow(T_1, (alpha_1 - 2.0) / alpha_1) / D);
        throw infeasible_error(
            "threshold_lower_bound_two_tier_closed: tau0 infeasible; achievable ceiling is " +
                std::to_string(ceiling),
            ceiling);
    }
    return std::pow(inner, alpha_K / (alpha_K - 2.0));
}

double tau0_max(const NetworkConfig& cfg, const std::vector<double>& T_partial,
                std::optional<std::size_t> l_opt) {
    cfg.validate();
    if (cfg.K() < 2) throw std::domain_error("tau0_max: at least two tiers required");
    check_partial(cfg, T_partial);
    const BoundContext ctx = bound_context(cfg, l_opt);
    return ceiling_from_context(cfg, ctx, pinned_sum(ctx, T_partial));
}

double threshold_exact(const NetworkConfig& cfg, const std::vector<double>& T_partial,
                       double rate_rel_tol, const RateFn& rate) {
    cfg.validate();
    check_partial(cfg, T_partial);
    if (!std::isfinite(rate_rel_tol) || rate_rel_tol <= 0.0)
        throw std::domain_error("threshold_exact: rate tolerance must be positive");
    const RateFn& eval = rate ? rate : RateFn(default_rate);

    const double floor = threshold_lower_bound(cfg, T_partial);  // may throw infeasible
    ThresholdVector probe;
    probe.T = T_partial;
    probe.T.push_back(floor);
    const auto rate_at = [&](double T_K) {
        probe.T.back() = T_K;
        return eval(cfg, probe);
    };

    // the bound is a true floor, so the root lives at or above it
    double lo = floor;
    double rate_lo = rate_at(lo);
    while (rate_lo < cfg.tau0 && lo > floor * 1e-6) {
        lo *= 0.1;
        rate_lo = rate_at(lo);
    }
    if (rate_lo < cfg.tau0)
        throw numeric_error("threshold_exact: no bracket below the analytic floor");
    double hi = floor;
    double rate_hi = rate_at(hi);
    while (rate_hi >= cfg.tau0 && hi < floor * 1e6) {
        hi *= 10.0;
        rate_hi = rate_at(hi);
    }
    if (rate_hi >= cfg.tau0)
        throw numeric_error("threshold_exact: rate requirement still met at 1e6x the floor");

    double mid = std::sqrt(lo * hi);
    for (int it = 0; it < 200; ++it) {
        mid = std::sqrt(lo * hi);
        const double value = rate_at(mid);
        if (std::fabs(value - cfg.tau0) <= rate_rel_tol * cfg.tau0) return mid;
        (value > cfg.tau0 ? lo : hi) = mid;
        if (hi / lo < 1.0 + 1e-13) break;
    }
    return mid;
}

double equal_alpha_lower_bound(const NetworkConfig& cfg,
                               const std::vector<double>& T_partial) {
    cfg.validate();
    check_partial(cfg, T_partial);
    if (!equal_exponents(cfg))
        throw std::domain_error("equal_alpha_lower_bound: all tiers must share one exponent");
    const double alpha = cfg.tiers.front().alpha;
    const auto om = omega(cfg).omega;
    const std::size_t K = cfg.K();

    double om_sum = 0.0;
    for (double v : om) om_sum += v;
    const double xi = 0.5 * (alpha - 2.0) * numerics::gamma_fn(1.0 - 2.0 / alpha) *
                      std::pow(om_sum, 0.5 * alpha) / om[K - 1];

    double pinned = 0.0;
    for (std::size_t k = 0; k + 1 < K; ++k)
        pinned += om[k] * std::pow(T_partial[k], (alpha - 2.0) / alpha) / om[K - 1];

    const double inner = xi * std::exp(0.5 * (alpha - 2.0) * kEuler - cfg.tau0) - pinned;
    if (!(inner > 0.0)) {
        const double ceiling = 0.5 * (alpha - 2.0) * kEuler + std::log(xi / pinned);
        throw infeasible_error(
            "equal_alpha_lower_bound: tau0 infeasible; achievable ceiling is " +
                std::to_string(ceiling),
            ceiling);
    }
    return std::pow(inner, alpha / (alpha - 2.0));
}

MonotonicityRegions lambda_monotonicity_regions(const NetworkConfig& cfg,
                                                const std::vector<double>& T_partial) {
    cfg.validate();
    check_partial(cfg, T_partial);
    if (cfg.K() < 2)
        throw std::domain_error("lambda_monotonicity_regions: at least two tiers required");
    if (!equal_exponents(cfg))
        throw std::domain_error(
            "lambda_monotonicity_regions: all tiers must share one exponent");

    const double alpha = cfg.tiers.front().alpha;
    const std::size_t K = cfg.K();
    const auto moment = [&](std::size_t k) {
        return cfg.tiers[k].fading.frac_moment(2.0 / alpha) *
               std::pow(cfg.tiers[k].p, 2.0 / alpha);
    };

    const double denom = moment(K - 1);
    double weighted = 0.0;
    for (std::size_t k = 0; k + 1 < K; ++k) weighted += moment(k) * cfg.tiers[k].lambda;
    const double G1 = 2.0 * weighted / ((alpha - 2.0) * denom);

    const auto om = omega(cfg).omega;
    double om_sum = 0.0;
    double threshold_weighted = 0.0;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        om_sum += om[k];
        threshold_weighted += moment(k) * cfg.tiers[k].lambda *
                              std::pow(T_partial[k], (alpha - 2.0) / alpha);
    }
    const double G2 =
        4.0 * threshold_weighted /
        ((alpha - 2.0) * (alpha - 2.0) * numerics::gamma_fn(1.0 - 2.0 / alpha) *
         std::exp(0.5 * (alpha - 2.0) * kEuler - cfg.tau0) *
         std::pow(om_sum, 0.5 * (alpha - 2.0)) * denom);
    return {G1, G2};
}

namespace {

OptimalThresholds assemble_solution(const NetworkConfig& cfg, const BoundContext& ctx,
                                    const std::vector<double>& power_ratio, double T_last) {
    const std::size_t K = cfg.K();
    OptimalThresholds out;
    out.thresholds.T.resize(K);
    for (std::size_t k = 0; k < K; ++k) out.thresholds.T[k] = power_ratio[k] * T_last;

    double residual = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < K; ++j)
            lhs += ctx.B[j] *
                   std::pow(power_ratio[j] / power_ratio[k] * out.thresholds.T[k],
                            ctx.beta[j]);
        residual = std::max(residual, std::fabs(lhs - ctx.rhs));
    }
    out.residual = residual;
    out.achieved_rate_lower_bound = rate_lower_bound(cfg, out.thresholds, ctx.l);
    return out;
}

std::vector<double> per_bs_power_ratio(const NetworkConfig& cfg) {
    // thresholds stay proportional to each tier's total per-BS power draw
    std::vector<double> ratio(cfg.K());
    const auto& last = cfg.tiers.back();
    const double denom = last.P0 + last.delta * last.p + cfg.P_bh;
    for (std::size_t k = 0; k < cfg.K(); ++k) {
        const auto& tier = cfg.tiers[k];
        ratio[k] = (tier.P0 + tier.delta * tier.p + cfg.P_bh) / denom;
    }
    return ratio;
}

OptimalThresholds solve_general(const NetworkConfig& cfg, bool force_bisection) {
    cfg.validate();
    const BoundContext ctx = bound_context(cfg, std::nullopt);
    const std::vector<double> ratio = per_bs_power_ratio(cfg);
    const std::size_t K = cfg.K();

    if (!force_bisection && equal_exponents(cfg)) {
        const double alpha = cfg.tiers.front().alpha;
        const auto& om = ctx.om;
        double om_sum = 0.0;
        for (double v : om) om_sum += v;
        const double xi = 0.5 * (alpha - 2.0) * numerics::gamma_fn(1.0 - 2.0 / alpha) *
                          std::pow(om_sum, 0.5 * alpha) / om[K - 1];
        double weight = 0.0;
        for (std::size_t j = 0; j < K; ++j)
            weight += ctx.B[j] * std::pow(ratio[j], (alpha - 2.0) / alpha);
        const double T_last = std::pow(
            xi * std::exp(0.5 * (alpha - 2.0) * kEuler - cfg.tau0) / weight,
            alpha / (alpha - 2.0));
        return assemble_solution(cfg, ctx, ratio, T_last);
    }

    const auto lhs_at = [&](double T_last) {
        double acc = 0.0;
        for (std::size_t j = 0; j < K; ++j)
            acc += ctx.B[j] * std::pow(ratio[j] * T_last, ctx.beta[j]);
        return acc;
    };
    double lo = 1e-20;
    double hi = 1e5;
    if (!(lhs_at(lo) < ctx.rhs && lhs_at(hi) > ctx.rhs))
        throw numeric_error("optimal_thresholds: root not bracketed in [1e-20, 1e5] W");
    for (int it = 0; it < 240 && hi / lo > 1.0 + 1e-14; ++it) {
        const double mid = std::sqrt(lo * hi);
        (lhs_at(mid) < ctx.rhs ? lo : hi) = mid;
    }
    return assemble_solution(cfg, ctx, ratio, std::sqrt(lo * hi));
}

}  // namespace

OptimalThresholds optimal_thresholds(const NetworkConfig& cfg) {
    return solve_general(cfg, false);
}

OptimalThresholds optimal_thresholds_exact(const NetworkConfig& cfg, double rate_rel_tol) {
    if (!std::isfinite(rate_rel_tol) || rate_rel_tol <= 0.0)
        throw std::domain_error("optimal_thresholds_exact: rate tolerance must be positive");
    OptimalThresholds base = optimal_thresholds(cfg);

    NetworkConfig quiet = cfg;
    quiet.sigma2 = 0.0;
    ThresholdVector scaled = base.thresholds;
    const auto rate_at = [&](double scale) {
        for (std::size_t k = 0; k < scaled.T.size(); ++k)
            scaled.T[k] = base.thresholds.T[k] * scale;
        return analytic::spatial_average_rate(quiet, scaled);
    };

    // the surrogate is a lower bound, so the true rate at scale 1 sits at or
    // above tau0 and shrinks as the thresholds grow
    double lo = 1.0;
    if (rate_at(lo) < cfg.tau0)
        throw numeric_error("optimal_thresholds_exact: surrogate solution misses tau0");
    double hi = 2.0;
    int guard = 0;
    while (rate_at(hi) >= cfg.tau0) {
        hi *= 2.0;
        if (++guard > 60)
            throw numeric_error("optimal_thresholds_exact: no finite rescale reaches tau0");
    }
    double mid = std::sqrt(lo * hi);
    double value = rate_at(mid);
    for (int it = 0; it < 200; ++it) {
        mid = std::sqrt(lo * hi);
        value = rate_at(mid);
        if (std::fabs(value - cfg.tau0) <= rate_rel_tol * cfg.tau0) break;
        (value >= cfg.tau0 ? lo : hi) = mid;
        if (hi / lo < 1.0 + 1e-13) break;
    }
    OptimalThresholds out;
    rate_at(mid);
    out.thresholds = scaled;
    out.residual = std::fabs(value - cfg.tau0) / cfg.tau0;
    out.achieved_rate_lower_bound = rate_lower_bound(cfg, scaled);
    return out;
}

namespace detail {

OptimalThresholds solve_by_bisection(const NetworkConfig& cfg) {
    return solve_general(cfg, true);
}

}  // namespace detail

}  // namespace hetnet::optimizer
