#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/optimizer.hpp"
#include "oracles.hpp"

using namespace hetnet;
using oracle::close_rel;
using oracle::gamma_lanczos;
using oracle::random_network;
using oracle::reference_two_tier;

namespace {

constexpr double kEuler = 0.57721566490153286;

double per_bs_power(const TierParams& tier, double p_bh) {
    return tier.P0 + tier.delta * tier.p + p_bh;
}

double to_db(double w) { return 10.0 * std::log10(w); }

// Pin the first K-1 thresholds at 1.5x each tier's mean spacing so that random
// configs land in a comfortably feasible regime.
std::vector<double> spacing_pins(const NetworkConfig& cfg) {
    std::vector<double> pins;
    for (std::size_t k = 0; k + 1 < cfg.K(); ++k) {
        const double spacing = 1.0 / std::sqrt(M_PI * cfg.tiers[k].lambda);
        pins.push_back(threshold_from_radius(cfg.tiers[k], 1.5 * spacing));
    }
    return pins;
}

}  // namespace

TEST_CASE("interference scale: unit algebra, linearity, factor cross-check") {
    NetworkConfig unit;
    unit.tiers.push_back({1.0 / M_PI, 1.0, 4.0, 10.0, 1.0, FadingModel::deterministic(1.0)});
    unit.tau0 = 1.0;
    CHECK(close_rel(optimizer::omega(unit).omega[0], std::sqrt(M_PI), 1e-12));

    NetworkConfig doubled = unit;
    doubled.tiers[0].lambda *= 2.0;
    CHECK(close_rel(optimizer::omega(doubled).omega[0], 2.0 * std::sqrt(M_PI), 1e-13));

    const NetworkConfig ref = reference_two_tier();
    const auto om = optimizer::omega(ref).omega;
    for (std::size_t k = 0; k < 2; ++k) {
        const double a = ref.tiers[k].alpha;
        const double expected = M_PI * ref.tiers[k].lambda * gamma_lanczos(1.0 + 2.0 / a) *
                                std::pow(ref.tiers[k].p, 2.0 / a) *
                                gamma_lanczos(1.0 - 2.0 / a);
        CHECK(close_rel(om[k], expected, 1e-10));
    }
    CHECK(close_rel(om[0], 9.47490393678826216e-05, 1e-12));
    CHECK(close_rel(om[1], 2.26775709210495340e-04, 1e-12));
}

TEST_CASE("interaction term: empty bracket, closed form, series cross-checks") {
    NetworkConfig solo = reference_two_tier();
    solo.tiers.resize(1);
    CHECK(optimizer::theta(solo, 0) == 0.0);
    CHECK_THROWS_AS(optimizer::theta(solo, 1), std::domain_error);

    for (std::uint64_t seed : {11u, 12u}) {
        const NetworkConfig eq = random_network(seed, 2, /*equal_alpha=*/true);
        const auto om = optimizer::omega(eq).omega;
        const double alpha = eq.tiers[0].alpha;
        const double total = om[0] + om[1];
        for (std::size_t l = 0; l < 2; ++l)
            CHECK(close_rel(optimizer::theta(eq, l), 0.5 * alpha * std::log(total / om[l]),
                            1e-8));
    }
    {
        const NetworkConfig eq = random_network(13, 3, /*equal_alpha=*/true);
        const auto om = optimizer::omega(eq).omega;
        const double alpha = eq.tiers[0].alpha;
        const double total = om[0] + om[1] + om[2];
        for (std::size_t l = 0; l < 3; ++l)
            CHECK(close_rel(optimizer::theta(eq, l), 0.5 * alpha * std::log(total / om[l]),
                            1e-8));
    }

    const NetworkConfig ref = reference_two_tier();
    CHECK(close_rel(optimizer::theta(ref, 0), 4.13366158426237895, 1e-9));
    CHECK(close_rel(optimizer::theta(ref, 1), 0.303709246065562766, 1e-9));
    CHECK(optimizer::theta(ref, 0) >= 0.0);
    CHECK(optimizer::theta(ref, 1) >= 0.0);

    const auto series = optimizer::theta_taylor_two_tier(ref, 10);
    CHECK(close_rel(series.value, optimizer::theta(ref, series.l), 1e-8));
}

TEST_CASE("two-tier series: anchoring, single term, convergence flag") {
    const NetworkConfig ref = reference_two_tier();
    const auto om = optimizer::omega(ref).omega;

    const auto one = optimizer::theta_taylor_two_tier(ref, 1);
    CHECK(one.l == 1);
    CHECK(one.converged);
    const double a1 = ref.tiers[0].alpha, a2 = ref.tiers[1].alpha;
    const double ratio = om[0] * std::pow(om[1], -a2 / a1);
    CHECK(ratio < 1.0);
    CHECK(close_rel(one.value, 0.5 * a2 * ratio * gamma_lanczos(a2 / a1), 1e-12));

    const double exact = optimizer::theta(ref, 1);
    double last_err = std::fabs(one.value - exact);
    CHECK(std::fabs(optimizer::theta_taylor_two_tier(ref, 2).value - exact) <= 2.5e-3);
    for (int m : {2, 3, 5, 10}) {
        const double err = std::fabs(optimizer::theta_taylor_two_tier(ref, m).value - exact);
        CHECK(err <= last_err * (1.0 + 1e-12));
        last_err = err;
    }
    CHECK(last_err < 1e-8);

    NetworkConfig swapped = ref;
    std::swap(swapped.tiers[0], swapped.tiers[1]);
    const auto flipped = optimizer::theta_taylor_two_tier(swapped, 10);
    CHECK(flipped.l == 0);
    CHECK(flipped.converged);
    CHECK(close_rel(flipped.value, optimizer::theta(swapped, 0), 1e-8));

    NetworkConfig twin;
    twin.tiers.push_back({1.0 / M_PI, 1.0, 4.0, 10.0, 1.0, FadingModel::deterministic(1.0)});
    twin.tiers.push_back(twin.tiers[0]);
    twin.tau0 = 1.0;
    const auto stuck = optimizer::theta_taylor_two_tier(twin, 6);
    CHECK_FALSE(stuck.converged);
    CHECK(std::isfinite(stuck.value));

    NetworkConfig solo = ref;
    solo.tiers.resize(1);
    CHECK_THROWS_AS(optimizer::theta_taylor_two_tier(solo, 2), std::domain_error);
    CHECK_THROWS_AS(optimizer::theta_taylor_two_tier(ref, 0), std::domain_error);
}

TEST_CASE("last-tier bound: degenerate single tier and reference values") {
    NetworkConfig solo = reference_two_tier();
    solo.tiers.resize(1);
    const double om = optimizer::omega(solo).omega[0];
    const double a = solo.tiers[0].alpha;
    const double D = (a - 2.0) * gamma_lanczos(1.0 - 2.0 / a) * std::pow(om, 0.5 * a) /
                     (2.0 * om);
    const double expected =
        std::pow(D * std::exp(0.5 * (a - 2.0) * kEuler - solo.tau0), a / (a - 2.0));
    CHECK(close_rel(optimizer::threshold_lower_bound(solo, {}), expected, 1e-10));

    NetworkConfig ref = reference_two_tier();
    ref.tau0 = 4.0;
    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    const double lb = optimizer::threshold_lower_bound(ref, {T1});
    CHECK(close_rel(lb, 4.14154502224372625e-10, 1e-9));
    CHECK(close_rel(optimizer::threshold_lower_bound(ref, {T1}, 0), lb, 1e-9));
    CHECK(close_rel(optimizer::threshold_lower_bound(ref, {T1}, 1), lb, 1e-9));
}

TEST_CASE("last-tier bound: reference-tier independence on random networks") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        NetworkConfig cfg = random_network(seed, 2);
        const auto pins = spacing_pins(cfg);
        cfg.tau0 = 0.8 * optimizer::tau0_max(cfg, pins);
        const double base = optimizer::threshold_lower_bound(cfg, pins, 0);
        CHECK(close_rel(optimizer::threshold_lower_bound(cfg, pins, 1), base, 1e-9));
    }
    NetworkConfig three = random_network(24, 3);
    const auto pins = spacing_pins(three);
    three.tau0 = 0.8 * optimizer::tau0_max(three, pins);
    const double base = optimizer::threshold_lower_bound(three, pins, 0);
    for (std::size_t l : {1u, 2u})
        CHECK(close_rel(optimizer::threshold_lower_bound(three, pins, l), base, 1e-9));
}

TEST_CASE("last-tier bound: monotone in pinned thresholds and rate floor") {
    NetworkConfig ref = reference_two_tier();
    ref.tau0 = 4.0;
    double prev = 0.0;
    for (double R1 : {300.0, 400.0, 500.0, 600.0, 700.0}) {
        const double lb =
            optimizer::threshold_lower_bound(ref, {threshold_from_radius(ref.tiers[0], R1)});
        CHECK(lb > prev);  // shrinking T1 raises the burden on the last tier
        prev = lb;
    }

    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    prev = std::numeric_limits<double>::infinity();
    for (double tau0 : {3.0, 3.5, 4.0, 4.5, 5.0}) {
        ref.tau0 = tau0;
        const double lb = optimizer::threshold_lower_bound(ref, {T1});
        CHECK(lb < prev);
        prev = lb;
    }

    // The surrogate is a true lower bound: the rate at the bound still meets tau0.
    ref.tau0 = 4.0;
    CHECK(analytic::spatial_average_rate(
              ref, ThresholdVector{{T1, optimizer::threshold_lower_bound(ref, {T1})}}) >=
          ref.tau0);
    for (std::uint64_t seed : {25u, 26u, 27u}) {
        NetworkConfig cfg = random_network(seed, 2);
        auto pins = spacing_pins(cfg);
        cfg.tau0 = 0.8 * optimizer::tau0_max(cfg, pins);
        pins.push_back(optimizer::threshold_lower_bound(cfg, pins));
        CHECK(analytic::spatial_average_rate(cfg, ThresholdVector{pins}) >=
              cfg.tau0 - 1e-9);
    }
}

TEST_CASE("equal-exponent closed form agrees with the general bound") {
    for (std::uint64_t seed : {31u, 32u}) {
        NetworkConfig cfg = random_network(seed, 2, /*equal_alpha=*/true);
        const auto pins = spacing_pins(cfg);
        cfg.tau0 = 0.8 * optimizer::tau0_max(cfg, pins);
        CHECK(close_rel(optimizer::equal_alpha_lower_bound(cfg, pins),
                        optimizer::threshold_lower_bound(cfg, pins), 1e-9));
    }
    NetworkConfig cfg = random_network(33, 3, /*equal_alpha=*/true);
    const auto pins = spacing_pins(cfg);
    cfg.tau0 = 0.8 * optimizer::tau0_max(cfg, pins);
    CHECK(close_rel(optimizer::equal_alpha_lower_bound(cfg, pins),
                    optimizer::threshold_lower_bound(cfg, pins), 1e-9));

    // Direct substitution of the shared-exponent formula.
    const auto om = optimizer::omega(cfg).omega;
    const double a = cfg.tiers[0].alpha;
    const double om_sum = om[0] + om[1] + om[2];
    const double xi = (a - 2.0) * gamma_lanczos(1.0 - 2.0 / a) * std::pow(om_sum, 0.5 * a) /
                      (2.0 * om[2]);
    double pinned = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
        pinned += om[k] * std::pow(pins[k], (a - 2.0) / a) / om[2];
    const double expected = std::pow(
        xi * std::exp(0.5 * (a - 2.0) * kEuler - cfg.tau0) - pinned, a / (a - 2.0));
    CHECK(close_rel(optimizer::equal_alpha_lower_bound(cfg, pins), expected, 1e-10));

    CHECK_THROWS_AS(optimizer::equal_alpha_lower_bound(reference_two_tier(),
                                                       {threshold_from_radius(
                                                           reference_two_tier().tiers[0],
                                                           500.0)}),
                    std::domain_error);
}

TEST_CASE("feasibility ceiling: boundary behavior and bisection oracle") {
    NetworkConfig ref = reference_two_tier();
    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    const double ceiling = optimizer::tau0_max(ref, {T1});
    CHECK(close_rel(ceiling, 7.69776964164399313, 1e-9));
    CHECK(close_rel(optimizer::tau0_max(ref, {T1}, 0), ceiling, 1e-9));
    CHECK(close_rel(optimizer::tau0_max(ref, {T1}, 1), ceiling, 1e-9));

    // Approaching the ceiling drives the bound to zero like (tau0_max - tau0)^{a/(a-2)}.
    auto bound_at = [&](double tau0) {
        NetworkConfig cfg = ref;
        cfg.tau0 = tau0;
        return optimizer::threshold_lower_bound(cfg, {T1});
    };
    const double near = bound_at(ceiling - 1e-7);
    const double mid = bound_at(ceiling - 1e-3);
    const double far = bound_at(ceiling - 1e-1);
    CHECK(near < mid);
    CHECK(mid < far);
    CHECK(near / far < 1e-9);

    NetworkConfig over = ref;
    over.tau0 = ceiling + 1e-6;
    try {
        optimizer::threshold_lower_bound(over, {T1});
        FAIL("infeasible tau0 accepted");
    } catch (const infeasible_error& e) {
        CHECK(close_rel(e.tau0_max(), ceiling, 1e-12));
    }

    // Independent location of the feasibility boundary.
    double lo = ceiling - 1.0, hi = ceiling + 1.0;
    for (int i = 0; i < 60; ++i) {
        const double midpoint = 0.5 * (lo + hi);
        NetworkConfig cfg = ref;
        cfg.tau0 = midpoint;
        bool feasible = true;
        try {
            optimizer::threshold_lower_bound(cfg, {T1});
        } catch (const infeasible_error&) {
            feasible = false;
        }
        (feasible ? lo : hi) = midpoint;
    }
    CHECK(std::fabs(0.5 * (lo + hi) - ceiling) < 1e-8);

    NetworkConfig solo = ref;
    solo.tiers.resize(1);
    CHECK_THROWS_AS(optimizer::tau0_max(solo, {}), std::domain_error);
}

TEST_CASE("two-tier closed form: series limit and direct substitution") {
    NetworkConfig ref = reference_two_tier();
    ref.tau0 = 4.0;
    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    const double lb = optimizer::threshold_lower_bound(ref, {T1});
    CHECK(close_rel(optimizer::threshold_lower_bound_two_tier_closed(ref, T1, 40), lb, 1e-9));

    // Re-derive the M=2 value from scratch.
    const auto om = optimizer::omega(ref).omega;
    const double a1 = ref.tiers[0].alpha, a2 = ref.tiers[1].alpha;
    const double r = om[0] * std::pow(om[1], -a2 / a1);
    const double theta2 = 0.5 * a2 * (r * gamma_lanczos(a2 / a1) -
                                      0.5 * r * r * gamma_lanczos(2.0 * a2 / a1));
    const double g2 = gamma_lanczos(1.0 - 2.0 / a2);
    const double D = (a2 - 2.0) * g2 * std::pow(om[1], 0.5 * a2) / (2.0 * om[1]);
    const double B1 =
        (a2 - 2.0) * g2 * om[0] / ((a1 - 2.0) * gamma_lanczos(1.0 - 2.0 / a1) * om[1]);
    const double rhs = D * std::exp(0.5 * (a2 - 2.0) * kEuler + theta2 - ref.tau0);
    const double expected = std::pow(rhs - B1 * std::pow(T1, (a1 - 2.0) / a1),
                                     a2 / (a2 - 2.0));
    CHECK(close_rel(optimizer::threshold_lower_bound_two_tier_closed(ref, T1, 2), expected,
                    1e-10));

    // Threshold-level accuracy of the truncated series across the rate range.
    for (double tau0 : {3.0, 3.5, 4.0, 4.5, 5.0}) {
        NetworkConfig cfg = reference_two_tier();
        cfg.tau0 = tau0;
        const double closed = optimizer::threshold_lower_bound_two_tier_closed(cfg, T1, 2);
        const double full = optimizer::threshold_lower_bound(cfg, {T1});
        CHECK(std::fabs(to_db(closed) - to_db(full)) <= 0.1);
    }
}

TEST_CASE("rate lower bound: reference-tier invariance and validity") {
    const NetworkConfig ref = reference_two_tier();
    const auto tv = thresholds_from_radii(ref, {500.0, 150.0});
    const double b0 = optimizer::rate_lower_bound(ref, tv, 0);
    CHECK(close_rel(optimizer::rate_lower_bound(ref, tv, 1), b0, 1e-9));
    CHECK(close_rel(optimizer::rate_lower_bound(ref, tv), b0, 1e-12));

    const double rate = analytic::spatial_average_rate(ref, tv);
    CHECK(rate >= b0);
    CHECK(b0 > 0.99 * rate);  // tight at reference scales

    // The bound tightens as every threshold shrinks.
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double s : {1.0, 0.3, 0.1, 0.03}) {
        ThresholdVector scaled{{tv.T[0] * s, tv.T[1] * s}};
        const double gap = analytic::spatial_average_rate(ref, scaled) -
                           optimizer::rate_lower_bound(ref, scaled);
        CHECK(gap >= -1e-9);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }

    for (std::uint64_t seed : {35u, 36u, 37u}) {
        NetworkConfig cfg = random_network(seed, 2);
        auto pins = spacing_pins(cfg);
        pins.push_back(threshold_from_radius(
            cfg.tiers[1], 1.2 / std::sqrt(M_PI * cfg.tiers[1].lambda)));
        ThresholdVector probe{pins};
        CHECK(analytic::spatial_average_rate(cfg, probe) >=
              optimizer::rate_lower_bound(cfg, probe) - 1e-9);
    }
}

TEST_CASE("exact last-tier threshold: meets the rate and dominates the bound") {
    NetworkConfig ref = reference_two_tier();
    ref.tau0 = 4.0;
    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    const double exact = optimizer::threshold_exact(ref, {T1}, 1e-8);
    const double lb = optimizer::threshold_lower_bound(ref, {T1});
    CHECK(exact >= lb);
    CHECK(close_rel(analytic::spatial_average_rate(ref, ThresholdVector{{T1, exact}}), 4.0,
                    5e-8));
    CHECK(to_db(exact) - to_db(lb) <= 0.2);

    double prev_gap = std::numeric_limits<double>::infinity();
    double prev_T = std::numeric_limits<double>::infinity();
    for (double tau0 : {3.0, 3.5, 4.0, 4.5, 5.0}) {
        NetworkConfig cfg = reference_two_tier();
        cfg.tau0 = tau0;
        const double ex = optimizer::threshold_exact(cfg, {T1});
        const double bound = optimizer::threshold_lower_bound(cfg, {T1});
        const double gap = to_db(ex) - to_db(bound);
        CHECK(gap >= 0.0);
        CHECK(gap < prev_gap);
        CHECK(ex < prev_T);
        prev_gap = gap;
        prev_T = ex;
    }
}

TEST_CASE("exact last-tier threshold: random networks and the rate hook") {
    int solved = 0;
    for (std::uint64_t seed = 41; seed <= 52; ++seed) {
        NetworkConfig cfg = random_network(seed, 2 + seed % 2);
        const auto pins = spacing_pins(cfg);
        cfg.tau0 = 0.75 * optimizer::tau0_max(cfg, pins);
        // The pinned tiers alone may already deliver tau0 (the ceiling guards the
        // surrogate, not the true rate); then no last-tier threshold hits it.
        double ex;
        try {
            ex = optimizer::threshold_exact(cfg, pins);
        } catch (const numeric_error&) {
            auto absent = pins;
            absent.push_back(optimizer::threshold_lower_bound(cfg, pins) * 1e6);
            CHECK(analytic::spatial_average_rate(cfg, ThresholdVector{absent}) >= cfg.tau0);
            continue;
        }
        ++solved;
        CHECK(ex >= optimizer::threshold_lower_bound(cfg, pins) * (1.0 - 1e-12));
        auto full = pins;
        full.push_back(ex);
        CHECK(close_rel(analytic::spatial_average_rate(cfg, ThresholdVector{full}), cfg.tau0,
                        2e-6));
    }
    CHECK(solved >= 8);

    NetworkConfig ref = reference_two_tier();
    ref.tau0 = 4.0;
    const double T1 = threshold_from_radius(ref.tiers[0], 500.0);
    int calls = 0;
    const double hooked = optimizer::threshold_exact(
        ref, {T1}, 1e-6, [&calls](const NetworkConfig& cfg, const ThresholdVector& tv) {
            ++calls;
            return analytic::spatial_average_rate(cfg, tv);
        });
    CHECK(calls > 0);
    CHECK(close_rel(hooked, optimizer::threshold_exact(ref, {T1}), 1e-6));

    NetworkConfig over = ref;
    over.tau0 = optimizer::tau0_max(ref, {T1}) + 0.5;
    CHECK_THROWS_AS(optimizer::threshold_exact(over, {T1}), infeasible_error);
}

TEST_CASE("density regions: formula, linearity, finite-difference signs") {
    NetworkConfig eq = reference_two_tier();
    eq.tiers[0].alpha = eq.tiers[1].alpha = 4.0;
    eq.tau0 = 1.0;
    const double T1 = threshold_from_radius(eq.tiers[0], 500.0);
    const auto regions = optimizer::lambda_monotonicity_regions(eq, {T1});
    CHECK(regions.G1 > 0.0);
    CHECK(regions.G2 > 0.0);
    REQUIRE(regions.G1 - regions.G2 > 0.0);

    const double a = 4.0;
    const auto moment = [&](std::size_t k) {
        return eq.tiers[k].fading.frac_moment(2.0 / a) * std::pow(eq.tiers[k].p, 2.0 / a);
    };
    CHECK(close_rel(regions.G1,
                    2.0 * moment(0) * eq.tiers[0].lambda / ((a - 2.0) * moment(1)), 1e-12));

    NetworkConfig denser = eq;
    denser.tiers[0].lambda *= 2.0;
    CHECK(close_rel(optimizer::lambda_monotonicity_regions(denser, {T1}).G1,
                    2.0 * regions.G1, 1e-12));

    auto bound_at = [&](double lambda2) {
        NetworkConfig cfg = eq;
        cfg.tiers[1].lambda = lambda2;
        return optimizer::equal_alpha_lower_bound(cfg, {T1});
    };
    const double above = 2.0 * regions.G1;
    CHECK(bound_at(above * 1.001) >= bound_at(above * 0.999) * (1.0 - 1e-9));
    const double below = 0.5 * (regions.G1 - regions.G2);
    CHECK(bound_at(below * 1.001) <= bound_at(below * 0.999) * (1.0 + 1e-9));

    CHECK_THROWS_AS(optimizer::lambda_monotonicity_regions(reference_two_tier(), {T1}),
                    std::domain_error);
    NetworkConfig solo = eq;
    solo.tiers.resize(1);
    CHECK_THROWS_AS(optimizer::lambda_monotonicity_regions(solo, {}), std::domain_error);
}

TEST_CASE("joint optimizer: power ratios, active constraint, reference values") {
    const NetworkConfig ref = reference_two_tier();
    const auto opt = optimizer::optimal_thresholds(ref);
    CHECK(close_rel(opt.thresholds.T[0], 1.02392698520640645e-08, 1e-6));
    CHECK(close_rel(opt.thresholds.T[1], 5.50863775447289398e-10, 1e-6));
    CHECK(opt.residual <= 1e-9);
    CHECK(close_rel(opt.achieved_rate_lower_bound, ref.tau0, 1e-9));

    const double ratio = per_bs_power(ref.tiers[0], ref.P_bh) /
                         per_bs_power(ref.tiers[1], ref.P_bh);
    CHECK(close_rel(opt.thresholds.T[0] / opt.thresholds.T[1], ratio, 1e-12));

    CHECK(analytic::spatial_average_rate(ref, opt.thresholds) >= ref.tau0 - 1e-9);
    CHECK(close_rel(optimizer::rate_lower_bound(ref, opt.thresholds), ref.tau0, 1e-9));

    NetworkConfig solo = ref;
    solo.tiers.resize(1);
    const auto single = optimizer::optimal_thresholds(solo);
    CHECK(close_rel(single.thresholds.T[0], optimizer::threshold_lower_bound(solo, {}),
                    1e-12));

    NetworkConfig demanding = ref;
    demanding.tau0 = 8.0;
    const auto hard = optimizer::optimal_thresholds(demanding);
    CHECK(hard.thresholds.T[0] < opt.thresholds.T[0]);
    CHECK(close_rel(hard.achieved_rate_lower_bound, 8.0, 1e-9));
}

TEST_CASE("joint optimizer: closed form vs bisection and random networks") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        NetworkConfig cfg = random_network(seed, 2 + seed % 3, /*equal_alpha=*/true);
        const auto closed = optimizer::optimal_thresholds(cfg);
        const auto general = optimizer::detail::solve_by_bisection(cfg);
        REQUIRE(closed.thresholds.T.size() == general.thresholds.T.size());
        for (std::size_t k = 0; k < closed.thresholds.T.size(); ++k)
            CHECK(close_rel(closed.thresholds.T[k], general.thresholds.T[k], 1e-9));
    }
    for (std::uint64_t seed : {64u, 65u}) {
        NetworkConfig cfg = random_network(seed, 3);
        const auto opt = optimizer::optimal_thresholds(cfg);
        const double last = per_bs_power(cfg.tiers[2], cfg.P_bh);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(close_rel(opt.thresholds.T[k] / opt.thresholds.T[2],
                            per_bs_power(cfg.tiers[k], cfg.P_bh) / last, 1e-12));
        CHECK(close_rel(opt.achieved_rate_lower_bound, cfg.tau0, 1e-9));
        CHECK(analytic::spatial_average_rate(cfg, opt.thresholds) >= cfg.tau0 - 1e-9);
    }
}

TEST_CASE("joint optimizer: no feasible probe consumes less power") {
    const NetworkConfig ref = reference_two_tier();
    const auto opt = optimizer::optimal_thresholds(ref);
    const double best = analytic::cluster_power(ref, opt.thresholds);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> jitter(-2.5, 2.5);
    int feasible = 0;
    for (int i = 0; i < 300; ++i) {
        ThresholdVector probe{{opt.thresholds.T[0] * std::exp(jitter(gen)),
                               opt.thresholds.T[1] * std::exp(jitter(gen))}};
        if (optimizer::rate_lower_bound(ref, probe) < ref.tau0) continue;
        ++feasible;
        CHECK(analytic::cluster_power(ref, probe) >= best * (1.0 - 1e-9));
    }
    CHECK(feasible >= 50);
}

TEST_CASE("exact mode: rate met exactly with ratios preserved") {
    const NetworkConfig ref = reference_two_tier();
    const auto bound_mode = optimizer::optimal_thresholds(ref);
    const auto exact = optimizer::optimal_thresholds_exact(ref, 1e-8);

    CHECK(close_rel(analytic::spatial_average_rate(ref, exact.thresholds), ref.tau0, 2e-8));
    CHECK(exact.residual <= 1e-8);
    const double ratio = per_bs_power(ref.tiers[0], ref.P_bh) /
                         per_bs_power(ref.tiers[1], ref.P_bh);
    CHECK(close_rel(exact.thresholds.T[0] / exact.thresholds.T[1], ratio, 1e-12));

    // The surrogate overshoots, so the exact solve relaxes every threshold upward
    // and can only save power.
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(exact.thresholds.T[k] >= bound_mode.thresholds.T[k] * (1.0 - 1e-12));
    CHECK(analytic::cluster_power(ref, exact.thresholds) <=
          analytic::cluster_power(ref, bound_mode.thresholds));
}
