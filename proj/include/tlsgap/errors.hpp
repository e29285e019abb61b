#pragma once

#include <stdexcept>
#include <string>

namespace tlsgap {

// Requested local error could not be met by the adaptive integrator,
// or an oracle's step-size precondition was violated.
class ToleranceError : public std::runtime_error {
public:
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

// A fully suppressed bath (depth == 1) makes the TLS lifetime diverge.
// Callers model a perfect gap as depth = 1 - epsilon.
class PerfectGapError : public std::domain_error {
public:
    explicit PerfectGapError(const std::string& what) : std::domain_error(what) {}
};

// Configuration problems detected before any computation starts.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace tlsgap
