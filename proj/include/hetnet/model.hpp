#pragma once

#include <cstddef>
#include <vector>

namespace hetnet {

class PhiloxStream;

// Per-link fading/shadowing coefficient.  Only fractional moments E[Psi^s]
// with s in (0, 1] are ever needed analytically (s is 1/alpha or 2/alpha with
// alpha > 2), plus a sampler for the Monte Carlo path.
class FadingModel {
public:
    enum class Kind { exponential, deterministic, empirical };

    FadingModel() : FadingModel(Kind::exponential, 1.0, {}) {}
    static FadingModel exponential(double mean);
    static FadingModel deterministic(double value);
    static FadingModel empirical(std::vector<double> samples);

    Kind kind() const noexcept { return kind_; }
    double param() const noexcept { return param_; }  // mean or fixed value
    const std::vector<double>& samples() const noexcept { return samples_; }

    double frac_moment(double s) const;  // E[Psi^s], s in (0, 1]
    double sample(PhiloxStream& rng) const;

    bool operator==(const FadingModel&) const = default;

private:
    FadingModel(Kind kind, double param, std::vector<double> samples);

    Kind kind_;
    double param_;
    std::vector<double> samples_;
};

struct TierParams {
    double lambda;  // BS intensity, 1/m^2
    double p;       // transmit power, W
    double alpha;   // path-loss exponent, > 2
    double P0;      // static circuit power, W
    double delta;   // load factor on transmit power
    FadingModel fading;

    void validate() const;  // throws std::domain_error

    bool operator==(const TierParams&) const = default;
};

struct NetworkConfig {
    std::vector<TierParams> tiers;
    double P_bh = 0.0;    // backhaul power per BS, W
    double sigma2 = 0.0;  // noise power, W
    double tau0 = 1.0;    // rate requirement, nats/s/Hz

    std::size_t K() const noexcept { return tiers.size(); }
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

// Per-tier RSS thresholds in watts.
struct ThresholdVector {
    std::vector<double> T;

    void validate(std::size_t K) const;

    bool operator==(const ThresholdVector&) const = default;
};

// Mean radius of the cooperative region a tier contributes under threshold T_k:
// (p/T)^{1/alpha} * E[Psi^{1/alpha}].
double mean_radius(const TierParams& tier, double T_k);

// Inverse of mean_radius: the threshold whose cooperative region has mean
// radius R_k.
double threshold_from_radius(const TierParams& tier, double R_k);

ThresholdVector thresholds_from_radii(const NetworkConfig& cfg,
                                      const std::vector<double>& radii);
std::vector<double> radii_from_thresholds(const NetworkConfig& cfg,
                                          const ThresholdVector& thresholds);

}  // namespace hetnet
