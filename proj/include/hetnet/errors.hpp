#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

// The rate requirement cannot be met once the pinned thresholds are fixed.
// Carries the achievable ceiling so callers can report what would still work.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& what, double tau0_max)
        : std::runtime_error(what), tau0_max_(tau0_max) {}
    double tau0_max() const noexcept { return tau0_max_; }

private:
    double tau0_max_;
};

// Root bracketing or iteration failure outside the quadrature path.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetnet
