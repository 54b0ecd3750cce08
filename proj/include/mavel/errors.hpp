#pragma once

#include <stdexcept>
#include <string>

namespace mavel {

/// Invalid parameter, grid, or dimension passed to a library routine.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A constraint set admits no solution (e.g. QoS floor above what the track allows).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative procedure stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A profile whose energy vanishes cannot be ranked by the variance/energy ratio.
class DegenerateProfileError : public std::domain_error {
public:
    enum class Kind { unbounded_ee, zero_profile };

    DegenerateProfileError(Kind kind, const std::string& what)
        : std::domain_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Malformed configuration file or override.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An output file exists and overwriting was not requested, or it cannot be written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mavel
