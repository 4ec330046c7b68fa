#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

// Argument outside the mathematical domain of an operation (x <= 0, z on the cut, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested feature does not exist for this formfactor or engine.
struct UnsupportedError : std::logic_error {
    using std::logic_error::logic_error;
};

// A divergent moment or integral was required.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The discrete level is below the continuum: the model has a bound state and no pure decay.
struct BoundStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration or quadrature stopped without meeting its tolerance.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved(achieved) {}
    double achieved;  // error estimate or residual reached before giving up
};

// Malformed or inconsistent scenario configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace zeno
