#pragma once

// Reference implementations used only by tests.  Everything here is written
// against textbook definitions, independent of the library's numerics, so the
// two sides can disagree when the library is wrong.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hetnet/model.hpp"

namespace oracle {

// Lanczos approximation (g = 7, n = 9), accurate to ~1e-13 on (0, 30).
inline double gamma_lanczos(double x) {
    static const double kCoef[9] = {
        0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection
        return M_PI / (std::sin(M_PI * x) * gamma_lanczos(1.0 - x));
    }
    x -= 1.0;
    double a = kCoef[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + i);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

// Plain adaptive Simpson on a finite interval.
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fb, double fm, double whole, double tol,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("oracle simpson: depth exhausted");
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f, double a,
                                double b, double tol = 1e-12) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fb, fm, whole, tol, 60);
}

// Lower incomplete gamma by definition, via the substitution t = u^{1/s}
// which removes the endpoint singularity for s in (0, 1).
inline double lower_inc_gamma_def(double s, double x) {
    if (x <= 0.0) return 0.0;
    const double upper = std::pow(x, s);
    const auto integrand = [s](double u) { return std::exp(-std::pow(u, 1.0 / s)); };
    return integrate_simpson(integrand, 0.0, upper, 1e-14) / s;
}

// The cooperative-exponent kernel by its defining integral
//   Z(t, T, alpha) = int_{(T t)^{-2/alpha}}^inf [1 - exp(-u^{-alpha/2})] du,
// finite piece by Simpson, tail by the alternating series
//   sum_m (-1)^{m+1}/m! U^{1 - m alpha/2} / (m alpha/2 - 1).
inline double z_def(double t, double T, double alpha) {
    const double L = std::pow(T * t, -2.0 / alpha);
    const double U = std::max(L, 16.0);
    double tail = 0.0;
    double factorial = 1.0;
    for (int m = 1; m <= 40; ++m) {
        factorial *= m;
        const double e = 0.5 * m * alpha;
        const double term = std::pow(U, 1.0 - e) / (factorial * (e - 1.0));
        tail += (m % 2 == 1) ? term : -term;
        if (std::fabs(term) < 1e-18 * std::fabs(tail)) break;
    }
    double finite = 0.0;
    if (U > L) {
        const double half_alpha = 0.5 * alpha;
        finite = integrate_simpson(
            [half_alpha](double u) { return -std::expm1(-std::pow(u, -half_alpha)); },
            L, U, 1e-14);
    }
    return finite + tail;
}

// ---- statistics ------------------------------------------------------------

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
    MeanSe out;
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    if (v.size() < 2) return out;
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(v.size()) *
                             static_cast<double>(v.size() - 1)));
    return out;
}

inline bool close_rel(double a, double b, double rel, double abs = 0.0) {
    return std::fabs(a - b) <= std::max(abs, rel * std::max(std::fabs(a), std::fabs(b)));
}

// ---- reference setup -------------------------------------------------------

// Two-tier macro/pico network used for all cross-checked numbers.
inline hetnet::NetworkConfig reference_two_tier() {
    hetnet::TierParams macro;
    macro.lambda = 1.0 / (250.0 * 250.0 * M_PI);
    macro.p = 20.0;
    macro.alpha = 4.3;
    macro.P0 = 130.0;
    macro.delta = 4.7;
    macro.fading = hetnet::FadingModel::exponential(1.0);
    hetnet::TierParams pico;
    pico.lambda = 1.0 / (50.0 * 50.0 * M_PI);
    pico.p = 0.13;
    pico.alpha = 3.8;
    pico.P0 = 6.8;
    pico.delta = 4.0;
    pico.fading = hetnet::FadingModel::exponential(1.0);
    hetnet::NetworkConfig cfg;
    cfg.tiers = {macro, pico};
    cfg.P_bh = 5.0;
    cfg.sigma2 = 0.0;
    cfg.tau0 = 3.5;
    return cfg;
}

// ---- randomized configs ----------------------------------------------------

// Valid random networks for property tests; intensities and powers span the
// ranges the solvers must survive, not just the reference setup.
inline hetnet::NetworkConfig random_network(std::uint64_t seed, std::size_t K,
                                            bool equal_alpha = false,
                                            bool exponential_only = false) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    hetnet::NetworkConfig cfg;
    const double shared_alpha = 2.8 + 2.4 * unif(gen);
    for (std::size_t k = 0; k < K; ++k) {
        hetnet::TierParams tier;
        const double radius = 40.0 + 460.0 * unif(gen);  // mean spacing, m
        tier.lambda = 1.0 / (M_PI * radius * radius);
        tier.p = std::exp(std::log(0.05) + (std::log(40.0) - std::log(0.05)) * unif(gen));
        tier.alpha = equal_alpha ? shared_alpha : 2.8 + 2.4 * unif(gen);
        tier.P0 = 5.0 + 150.0 * unif(gen);
        tier.delta = 2.0 + 6.0 * unif(gen);
        if (exponential_only) {
            tier.fading = hetnet::FadingModel::exponential(0.5 + 2.0 * unif(gen));
        } else {
            switch (gen() % 3) {
                case 0:
                    tier.fading = hetnet::FadingModel::exponential(0.5 + 2.0 * unif(gen));
                    break;
                case 1:
                    tier.fading =
                        hetnet::FadingModel::deterministic(0.5 + 2.0 * unif(gen));
                    break;
                default: {
                    std::vector<double> samples;
                    for (int i = 0; i < 64; ++i)
                        samples.push_back(0.05 + 3.0 * unif(gen));
                    tier.fading = hetnet::FadingModel::empirical(std::move(samples));
                }
            }
        }
        cfg.tiers.push_back(std::move(tier));
    }
    cfg.P_bh = 5.0 * unif(gen);
    cfg.sigma2 = 0.0;
    cfg.tau0 = 1.0 + 3.0 * unif(gen);
    return cfg;
}

}  // namespace oracle
