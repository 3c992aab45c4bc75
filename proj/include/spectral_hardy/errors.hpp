#pragma once

#include <stdexcept>
#include <string>

namespace spectral_hardy {

/// Argument outside the supported parameter box.
class RangeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Gamma evaluated at a non-positive integer.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable as a finite double.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// An iterative or adaptive procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace spectral_hardy
