#ifndef GKDV_ERRORS_HPP
#define GKDV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace gkdv {

// Invalid user-facing configuration (bad grid size, unsupported k, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched field lengths and similar structural misuse.
class ShapeError : public std::logic_error {
public:
    explicit ShapeError(const std::string& msg) : std::logic_error(msg) {}
};

// Singular pivot or other failures inside the banded linear algebra.
class LinearAlgebraError : public std::runtime_error {
public:
    LinearAlgebraError(const std::string& msg, int row) : std::runtime_error(msg), row_index(row) {}
    int row_index;
};

// Non-finite values produced while evolving the PDE.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
    double time;
};

// Picard/Newton iteration failed to converge inside a time step.
class StepFailureError : public std::runtime_error {
public:
    StepFailureError(const std::string& msg, double t, std::vector<double> history)
        : std::runtime_error(msg), time(t), residual_history(std::move(history)) {}
    double time;
    std::vector<double> residual_history;
};

} // namespace gkdv

#endif
