#pragma once

#include <stdexcept>
#include <string>

namespace sweep {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its domain. `field()` names the offending input.
class DomainError : public Error {
public:
    DomainError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// The bisection bracket does not straddle a sign change.
class BracketError : public Error {
public:
    BracketError(double g_lo, double g_hi)
        : Error("bracket does not change sign: g(lo)=" + std::to_string(g_lo) +
                ", g(hi)=" + std::to_string(g_hi)),
          g_lo_(g_lo), g_hi_(g_hi) {}

    double g_lo() const noexcept { return g_lo_; }
    double g_hi() const noexcept { return g_hi_; }

private:
    double g_lo_;
    double g_hi_;
};

class MaxIterError : public Error {
public:
    explicit MaxIterError(int iterations)
        : Error("no convergence after " + std::to_string(iterations) + " iterations"),
          iterations_(iterations) {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

/// The sweeper is too slow to advance inward from the current radius.
class NoProgressError : public Error {
public:
    NoProgressError(double radius, double delta)
        : Error("no inward progress at radius " + std::to_string(radius) +
                " (delta=" + std::to_string(delta) + ")"),
          radius_(radius), delta_(delta) {}

    double radius() const noexcept { return radius_; }
    double delta() const noexcept { return delta_; }

private:
    double radius_;
    double delta_;
};

/// The end-game linear sweep cannot finish before evaders reach the sensor tips.
/// `threshold()` is the closed-form increment bound; `exact_threshold()` is the
/// boundary of the end-game inequality itself.
class InfeasibleError : public Error {
public:
    InfeasibleError(double delta_v, double threshold, double exact_threshold)
        : Error("end game infeasible for deltaV=" + std::to_string(delta_v) +
                "; deltaV threshold=" + std::to_string(threshold)),
          delta_v_(delta_v), threshold_(threshold), exact_threshold_(exact_threshold) {}

    double delta_v() const noexcept { return delta_v_; }
    double threshold() const noexcept { return threshold_; }
    double exact_threshold() const noexcept { return exact_threshold_; }

private:
    double delta_v_;
    double threshold_;
    double exact_threshold_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sweep
