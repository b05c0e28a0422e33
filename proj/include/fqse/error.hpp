#pragma once

#include <stdexcept>
#include <string>

namespace fqse {

/// Raised when a summation would need more than the hard cap of levels.
class truncation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Q_h vanishes while the cycle still does work, so the efficiency is undefined.
class degenerate_cycle : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The bracket handed to a root solve has no sign change of Q_R.
class no_root : public std::runtime_error {
public:
    no_root(const std::string& what, double residual_lo, double residual_hi)
        : std::runtime_error(what), residual_lo_(residual_lo), residual_hi_(residual_hi) {}

    double residual_lo() const noexcept { return residual_lo_; }
    double residual_hi() const noexcept { return residual_hi_; }

private:
    double residual_lo_;
    double residual_hi_;
};

/// Q_R evaluated to NaN or infinity somewhere inside a solve.
class non_finite_residual : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fqse
