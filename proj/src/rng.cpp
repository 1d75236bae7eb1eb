#include "hetnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hetnet {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kBump0 = 0x9E3779B9u;
constexpr std::uint32_t kBump1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t c1 = ctr[1];
    const std::uint32_t c3 = ctr[3];
    ctr[0] = hi1 ^ c1 ^ key[0];
    ctr[1] = lo1;
    ctr[2] = hi0 ^ c3 ^ key[1];
    ctr[3] = lo0;
}

// log(k!) accurate enough for the Poisson acceptance boundary
double log_factorial(double k) {
    static const double small[10] = {0.0, 0.0, 0.693147180559945, 1.791759469228055,
                                     3.178053830347946, 4.787491742782046,
                                     6.579251212010101, 8.525161361065415,
                                     10.604602902745251, 12.801827480081469};
    if (k < 10.0) return small[static_cast<int>(k)];
    const double x = k + 1.0;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return (x - 0.5) * std::log(x) - x + 0.918938533204672742 +
           inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

}  // namespace

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t realization,
                           std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32) ^
               static_cast<std::uint32_t>(realization >> 32)},
      ctr_hi_{static_cast<std::uint32_t>(realization), substream},
      block_(0),
      avail_(0) {}

void PhiloxStream::fill_block() {
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                            static_cast<std::uint32_t>(block_ >> 32), ctr_hi_[0],
                            ctr_hi_[1]};
    std::uint32_t key[2] = {key_[0], key_[1]};
    philox_round(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kBump0;
        key[1] += kBump1;
        philox_round(ctr, key);
    }
    out_[0] = ctr[0];
    out_[1] = ctr[1];
    out_[2] = ctr[2];
    out_[3] = ctr[3];
    avail_ = 4;
    ++block_;
}

std::uint32_t PhiloxStream::next_u32() {
    if (avail_ == 0) fill_block();
    return out_[4 - avail_--];
}

std::uint64_t PhiloxStream::next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double PhiloxStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PhiloxStream::next_double_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::next_exponential(double mean) {
    return -mean * std::log(next_double_open());
}

std::uint64_t PhiloxStream::next_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("PhiloxStream::next_below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
        const std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

long PhiloxStream::next_poisson(double mean) {
    if (!std::isfinite(mean) || mean < 0.0)
        throw std::domain_error("PhiloxStream::next_poisson: mean must be finite and nonnegative");
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = next_double_open();
        while (prod > limit) {
            prod *= next_double_open();
            ++k;
        }
        return k;
    }

    // Hoermann's PTRS transformed-rejection sampler
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = next_double() - 0.5;
        const double v = next_double_open();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_mean - mean - log_factorial(kf))
            return static_cast<long>(kf);
    }
}

}  // namespace hetnet
