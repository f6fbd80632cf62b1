#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpm {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed config, out-of-range physical parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical kernel or solver did not produce an acceptable result.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double last_z)
        : NumericalError(what + " (last valid z = " + std::to_string(last_z) + ")"),
          last_z_(last_z) {}
    double last_z() const noexcept { return last_z_; }

private:
    double last_z_;
};

class SingularMatrixError : public NumericalError {
public:
    explicit SingularMatrixError(std::size_t pivot)
        : NumericalError("singular matrix: zero pivot at index " + std::to_string(pivot)),
          pivot_(pivot) {}
    std::size_t pivot_index() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class NewtonError : public NumericalError {
public:
    NewtonError(const std::string& what, double residual_norm, std::vector<double> iterate,
                std::vector<double> history)
        : NumericalError(what + " (|F|inf = " + std::to_string(residual_norm) + ")"),
          residual_norm_(residual_norm),
          iterate_(std::move(iterate)),
          history_(std::move(history)) {}
    double residual_norm() const noexcept { return residual_norm_; }
    const std::vector<double>& iterate() const noexcept { return iterate_; }
    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    double residual_norm_;
    std::vector<double> iterate_;
    std::vector<double> history_;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Time stepping blew up or violated a constraint.
class StepError : public NumericalError {
public:
    StepError(const std::string& what, double t) : NumericalError(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

}  // namespace vpm
