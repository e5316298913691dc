#pragma once

#include <stdexcept>
#include <string>

namespace rotorlab {

/// Momentum basis too small: population leaked into the guard band.
class UnderResolved : public std::runtime_error {
public:
    UnderResolved(int n_max, double tail)
        : std::runtime_error("under-resolved: tail population " + std::to_string(tail) +
                             " at n_max=" + std::to_string(n_max)),
          n_max_(n_max), tail_(tail) {}

    int n_max() const noexcept { return n_max_; }
    double tail() const noexcept { return tail_; }

private:
    int n_max_;
    double tail_;
};

/// Ensemble width exceeds the resonance island; the harmonic formula does not apply.
class OutsideIsland : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sub-kick refinement of a smoothed analytic curve did not settle.
class NonIntegrable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace rotorlab
