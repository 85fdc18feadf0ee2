#ifndef MONAS_ERRORS_HPP
#define MONAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace monas {

/// Invalid configuration or validation failure. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed genotype string or table file. CLI maps this to exit code 1.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tensor/layer shape inconsistency, including spatial size underflow.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A latency lookup key is not covered by the device profile.
/// CLI maps this to exit code 2.
class MissingEntryError : public std::runtime_error {
public:
    explicit MissingEntryError(const std::string& key_text)
        : std::runtime_error("missing latency table entry: " + key_text), key(key_text) {}
    std::string key;
};

/// File read/write failure. CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace monas

#endif
