#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mrpi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// File contents are not a supported image format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied parameter violates an operation's precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but carries no usable signal (e.g. an all-zero field).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// The explicit level-set update produced a non-finite value.
///
/// Carries the evolution step and, once it has crossed the ensemble layer,
/// the index of the run that diverged.
class DivergenceError : public Error {
public:
    DivergenceError(std::string detail, std::optional<int> step = std::nullopt,
                    std::optional<int> run = std::nullopt)
        : Error(format(detail, step, run)), detail_(std::move(detail)), step_(step), run_(run) {}

    const std::string& detail() const noexcept { return detail_; }
    std::optional<int> step() const noexcept { return step_; }
    std::optional<int> run() const noexcept { return run_; }

private:
    static std::string format(const std::string& detail, std::optional<int> step,
                              std::optional<int> run) {
        std::string msg = "numerical divergence";
        if (run) msg += " in run " + std::to_string(*run);
        if (step) msg += " at step " + std::to_string(*step);
        return msg + ": " + detail;
    }

    std::string detail_;
    std::optional<int> step_;
    std::optional<int> run_;
};

}  // namespace mrpi
