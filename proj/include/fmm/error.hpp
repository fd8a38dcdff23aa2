#pragma once

#include <stdexcept>
#include <string>

namespace fmm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument outside the domain of a function (non-finite input,
/// distance beyond the normalising maximum, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Every rule activation is zero, so the center-average is undefined.
class NoActivationError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration: maps, tables, config files. `key()` names the
/// offending entity or key path.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Raised by shortest_path when the destination is unreachable.
class NoPathError : public Error {
public:
    using Error::Error;
};

/// Malformed input to an analysis routine (e.g. snapshots over different node sets).
class InputError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fmm
