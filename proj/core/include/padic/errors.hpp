#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace padic {

/// Invalid grid, operator or experiment parameters.
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A nonlinear solve stopped before meeting its residual contract.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residual_history)
        : std::runtime_error(what), history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Raised when a function expected to be an eigenfunction is not mapped to a
/// multiple of itself. On a correct grid this only happens through an indexing bug.
class NonEigenfunctionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace padic
