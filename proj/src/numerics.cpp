#include "hetnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace hetnet::numerics {

void QuadratureSpec::validate() const {
    if (!std::isfinite(rel_tol) || rel_tol <= 0.0)
        throw std::domain_error("QuadratureSpec: rel_tol must be finite and positive");
    if (!std::isfinite(abs_tol) || abs_tol < 0.0)
        throw std::domain_error("QuadratureSpec: abs_tol must be finite and nonnegative");
    if (max_subdivisions < 1)
        throw std::domain_error("QuadratureSpec: max_subdivisions must be at least 1");
}

double gamma_fn(double x) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error("gamma_fn: argument must be finite and positive");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error("log_gamma: argument must be finite and positive");
    // shift into the Stirling regime, then apply the asymptotic series
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return shift + (x - 0.5) * std::log(x) - x + 0.918938533204672742 +
           inv * (1.0 / 12.0 -
                  inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

double lower_inc_gamma(double s, double x) {
    if (!std::isfinite(s) || s <= 0.0 || s >= 1.0)
        throw std::domain_error("lower_inc_gamma: s must lie in (0, 1)");
    if (!std::isfinite(x) || x < 0.0)
        throw std::domain_error("lower_inc_gamma: x must be finite and nonnegative");
    if (x == 0.0) return 0.0;

    if (x < s + 1.0) {
        double term = 1.0 / s;
        double sum = term;
        for (int n = 1; n < 400; ++n) {
            term *= x / (s + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(s * std::log(x) - x);
    }

    // modified Lentz continued fraction for the upper tail
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 400; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double upper = std::exp(s * std::log(x) - x) * h;
    return gamma_fn(s) - upper;
}

double z_function(double t, double T, double alpha) {
    if (!std::isfinite(t) || t <= 0.0)
        throw std::domain_error("z_function: t must be finite and positive");
    if (!std::isfinite(T) || T < 0.0)
        throw std::domain_error("z_function: threshold must be finite and nonnegative");
    if (!std::isfinite(alpha) || alpha <= 2.0)
        throw std::domain_error("z_function: path-loss exponent must exceed 2");

    const double x = T * t;
    if (x == 0.0) return 0.0;
    const double s = 1.0 - 2.0 / alpha;

    if (x < 1.0) {
        // Both pieces are O(x^s) and nearly cancel as alpha grows; summing the
        // merged Taylor coefficients keeps full precision.
        double sum = 1.0 / s - 1.0;
        double sign_pow = 1.0;   // (-x)^n
        double factorial = 1.0;  // n!
        for (int n = 1; n <= 48; ++n) {
            sign_pow *= -x;
            factorial *= n;
            const double term = sign_pow * (1.0 / (s + n) - 1.0 / (n + 1.0)) / factorial;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
        }
        return std::pow(x, s) * sum;
    }
    return lower_inc_gamma(s, x) + std::expm1(-x) * std::pow(x, s - 1.0);
}

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss estimate.  Node i = 0 is
// the midpoint; odd indices are Kronrod-only, even indices carry Gauss weight.
constexpr double kNode[8] = {
    0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813};
constexpr double kWeight[8] = {
    0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
constexpr double kGaussWeight[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Segment {
    double a, b;
    double integral;
    double err;
};

template <class F>
Segment gk15(const F& h, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = h(mid);
    double kron = kWeight[0] * fc;
    double gauss = kGaussWeight[0] * fc;
    double resabs = kWeight[0] * std::fabs(fc);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNode[i];
        const double lo = h(mid - dx);
        const double hi = h(mid + dx);
        kron += kWeight[i] * (lo + hi);
        resabs += kWeight[i] * (std::fabs(lo) + std::fabs(hi));
        if (i % 2 == 0) gauss += kGaussWeight[i / 2] * (lo + hi);
    }
    kron *= half;
    gauss *= half;
    resabs *= half;
    double err = std::fabs(kron - gauss) * 200.0;
    err *= std::sqrt(err);
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
    return {a, b, kron, err};
}

}  // namespace

double integrate_semi_infinite(const std::function<double(double)>& f,
                               const QuadratureSpec& spec) {
    spec.validate();
    const auto h = [&f](double y) {
        const double v = f(std::exp(y)) * std::exp(y);
        if (std::isnan(v))
            throw std::domain_error("integrate_semi_infinite: integrand returned NaN");
        return v;
    };

    constexpr double y_cap = 340.0;

    // Locate the support of the transformed integrand on the log axis.
    std::vector<std::pair<double, double>> probes;
    double hmax = 0.0;
    const auto scan = [&](double step) {
        probes.clear();
        hmax = 0.0;
        for (double y = -y_cap; y <= y_cap + 1e-9; y += step) {
            const double v = std::fabs(h(y));
            probes.emplace_back(y, v);
            hmax = std::max(hmax, v);
        }
    };
    scan(4.0);
    if (hmax == 0.0) scan(0.5);
    if (hmax == 0.0) return 0.0;

    const double cut = hmax * 1e-21;
    double y_lo = y_cap;
    double y_hi = -y_cap;
    for (const auto& [y, v] : probes) {
        if (v > cut) {
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    y_lo = std::max(y_lo - 4.0, -y_cap);
    y_hi = std::min(y_hi + 4.0, y_cap);

    const auto worse = [](const Segment& u, const Segment& v) { return u.err < v.err; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> heap(worse);
    double total = 0.0;
    double toterr = 0.0;
    int used = 0;
    const auto push = [&](double a, double b) {
        Segment s = gk15(h, a, b);
        total += s.integral;
        toterr += s.err;
        heap.push(s);
        ++used;
    };
    {
        const int n = std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / 2.0)));
        for (int i = 0; i < n; ++i)
            push(y_lo + (y_hi - y_lo) * i / n, y_lo + (y_hi - y_lo) * (i + 1) / n);
    }

    const auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)); };
    const auto refine = [&] {
        while (toterr > target() && used < spec.max_subdivisions) {
            Segment s = heap.top();
            if (s.b - s.a < 1e-12 * std::max(1.0, std::fabs(s.a))) break;
            heap.pop();
            total -= s.integral;
            toterr -= s.err;
            const double m = 0.5 * (s.a + s.b);
            push(s.a, m);
            push(m, s.b);
            --used;  // a split replaces one segment by two
        }
    };
    refine();

    // Fringe check: grow the window while the next slab still matters.
    for (int side = 0; side < 2; ++side) {
        for (int ext = 0; ext < 60; ++ext) {
            double a, b;
            if (side == 0) {
                if (y_hi >= y_cap) break;
                a = y_hi;
                b = std::min(y_hi + 6.0, y_cap);
            } else {
                if (y_lo <= -y_cap) break;
                b = y_lo;
                a = std::max(y_lo - 6.0, -y_cap);
            }
            const Segment s = gk15(h, a, b);
            if (std::fabs(s.integral) + s.err <= 0.125 * target()) break;
            total += s.integral;
            toterr += s.err;
            heap.push(s);
            ++used;
            (side == 0 ? y_hi : y_lo) = (side == 0 ? b : a);
            refine();
        }
    }

    if (toterr > target())
        throw convergence_error("integrate_semi_infinite: tolerance not reached after " +
                                    std::to_string(used) + " segments",
                                total, toterr);
    return total;
}

}  // namespace hetnet::numerics
