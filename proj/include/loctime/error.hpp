#pragma once

#include <stdexcept>
#include <string>

namespace loctime {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent or invalid construction parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Caller combined objects that cannot be used together.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Configuration text that could not be turned into a RunConfig. `key` names
// the offending key path, e.g. "sigma.p".
class ParseError : public std::runtime_error {
public:
    ParseError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace loctime

namespace loctime {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace loctime
