#pragma once

#include <stdexcept>
#include <string>

namespace scp {

// Invalid configuration or preconditions on user-supplied parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unusable input data (files, datasets, traces).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A violated internal invariant; indicates a bug, not bad input.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace scp
