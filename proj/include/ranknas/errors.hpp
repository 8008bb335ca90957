#pragma once

#include <stdexcept>
#include <string>

namespace ranknas {

/// Training produced a non-finite loss (learning-rate blow-up or bad data).
struct NumericOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Landmark sampling cannot satisfy the Hamming-distance threshold.
struct InfeasibleThresholdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Enumeration would exceed the configured architecture cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rank statistic is undefined for the given input (e.g. all ties).
struct UndefinedStatisticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed config file; carries the offending line number (0 = file-level).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int ln, const std::string& msg)
        : std::runtime_error(ln > 0 ? "line " + std::to_string(ln) + ": " + msg : msg),
          line(ln) {}
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ranknas
