#include "hetnet/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "hetnet/numerics.hpp"
#include "hetnet/rng.hpp"

namespace hetnet {

FadingModel::FadingModel(Kind kind, double param, std::vector<double> samples)
    : kind_(kind), param_(param), samples_(std::move(samples)) {}

FadingModel FadingModel::exponential(double mean) {
    if (!std::isfinite(mean) || mean <= 0.0)
        throw std::domain_error("FadingModel: exponential mean must be finite and positive");
    return {Kind::exponential, mean, {}};
}

FadingModel FadingModel::deterministic(double value) {
    if (!std::isfinite(value) || value <= 0.0)
        throw std::domain_error("FadingModel: deterministic value must be finite and positive");
    return {Kind::deterministic, value, {}};
}

FadingModel FadingModel::empirical(std::vector<double> samples) {
    if (samples.empty())
        throw std::domain_error("FadingModel: empirical sample list must be nonempty");
    double top = 0.0;
    for (double v : samples) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::domain_error("FadingModel: empirical samples must be finite and nonnegative");
        top = std::max(top, v);
    }
    if (top == 0.0)
        throw std::domain_error("FadingModel: empirical samples must not all be zero");
    return {Kind::empirical, 0.0, std::move(samples)};
}

double FadingModel::frac_moment(double s) const {
    if (!std::isfinite(s) || s <= 0.0 || s > 1.0)
        throw std::domain_error("FadingModel::frac_moment: s must lie in (0, 1]");
    switch (kind_) {
        case Kind::exponential:
            return std::pow(param_, s) * numerics::gamma_fn(1.0 + s);
        case Kind::deterministic:
            return std::pow(param_, s);
        case Kind::empirical: {
            double acc = 0.0;
            for (double v : samples_) acc += std::pow(v, s);
            return acc / static_cast<double>(samples_.size());
        }
    }
    throw std::logic_error("FadingModel: unknown kind");
}

double FadingModel::sample(PhiloxStream& rng) const {
    switch (kind_) {
        case Kind::exponential:
            return rng.next_exponential(param_);
        case Kind::deterministic:
            return param_;
        case Kind::empirical:
            return samples_[rng.next_below(samples_.size())];
    }
    throw std::logic_error("FadingModel: unknown kind");
}

void TierParams::validate() const {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw std::domain_error("TierParams: lambda must be finite and positive");
    if (!std::isfinite(p) || p <= 0.0)
        throw std::domain_error("TierParams: transmit power must be finite and positive");
    if (!std::isfinite(alpha) || alpha <= 2.0)
        throw std::domain_error("TierParams: path-loss exponent must exceed 2");
    if (!std::isfinite(P0) || P0 < 0.0)
        throw std::domain_error("TierParams: static power must be finite and nonnegative");
    if (!std::isfinite(delta) || delta < 0.0)
        throw std::domain_error("TierParams: load factor must be finite and nonnegative");
}

void NetworkConfig::validate() const {
    if (tiers.empty()) throw std::domain_error("NetworkConfig: at least one tier required");
    for (const auto& tier : tiers) tier.validate();
    if (!std::isfinite(P_bh) || P_bh < 0.0)
        throw std::domain_error("NetworkConfig: backhaul power must be finite and nonnegative");
    if (!std::isfinite(sigma2) || sigma2 < 0.0)
        throw std::domain_error("NetworkConfig: noise power must be finite and nonnegative");
    if (!std::isfinite(tau0) || tau0 <= 0.0)
        throw std::domain_error("NetworkConfig: rate requirement must be finite and positive");
}

void ThresholdVector::validate(std::size_t K) const {
    if (T.size() != K)
        throw std::domain_error("ThresholdVector: expected " + std::to_string(K) +
                                " entries, got " + std::to_string(T.size()));
    for (double v : T)
        if (!std::isfinite(v) || v <= 0.0)
            throw std::domain_error("ThresholdVector: thresholds must be finite and positive");
}

double mean_radius(const TierParams& tier, double T_k) {
    tier.validate();
    if (!std::isfinite(T_k) || T_k <= 0.0)
        throw std::domain_error("mean_radius: threshold must be finite and positive");
    return std::pow(tier.p / T_k, 1.0 / tier.alpha) * tier.fading.frac_moment(1.0 / tier.alpha);
}

double threshold_from_radius(const TierParams& tier, double R_k) {
    tier.validate();
    if (!std::isfinite(R_k) || R_k <= 0.0)
        throw std::domain_error("threshold_from_radius: radius must be finite and positive");
    return tier.p * std::pow(tier.fading.frac_moment(1.0 / tier.alpha) / R_k, tier.alpha);
}

ThresholdVector thresholds_from_radii(const NetworkConfig& cfg,
                                      const std::vector<double>& radii) {
    if (radii.size() != cfg.K())
        throw std::domain_error("thresholds_from_radii: need one radius per tier");
    ThresholdVector out;
    out.T.reserve(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k)
        out.T.push_back(threshold_from_radius(cfg.tiers[k], radii[k]));
    return out;
}

std::vector<double> radii_from_thresholds(const NetworkConfig& cfg,
                                          const ThresholdVector& thresholds) {
    thresholds.validate(cfg.K());
    std::vector<double> out;
    out.reserve(cfg.K());
    for (std::size_t k = 0; k < cfg.K(); ++k)
        out.push_back(mean_radius(cfg.tiers[k], thresholds.T[k]));
    return out;
}

}  // namespace hetnet
