#pragma once

#include <stdexcept>
#include <string>

namespace ictomo {

/// Input violates a mathematical precondition (negative density, zero
/// expectation under a positive count, out-of-range layer index, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Geometry, spectrum or solver configuration is unusable.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ictomo
