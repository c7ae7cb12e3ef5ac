// errors.hpp — exception categories mapped to CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace qion {

// Bad configuration or arguments (CLI exit 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical guarantee failed: residual exceeded, series did not converge,
// truncation too small (CLI exit 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble while writing run artifacts (CLI exit 4).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qion
