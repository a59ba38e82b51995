#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

// Bad input: model parameters, spectral points outside the domain, CLI config.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-convergence, residual checks failing, caps exceeded.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jacobi
