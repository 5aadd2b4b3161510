#pragma once

#include <stdexcept>
#include <string>

namespace qwork {

// Raised when a numerical contract is broken at runtime (unitarity breach,
// non-finite generator, truncation leakage, ...). The CLI maps this to
// exit code 3; plain std::invalid_argument maps to exit code 2.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a config file or an override fails validation. The message
// names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qwork
