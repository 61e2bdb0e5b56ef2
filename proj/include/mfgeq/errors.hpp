#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mfgeq {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two objects that must share a sample count or a time grid do not.
class MismatchError : public Error {
public:
    using Error::Error;
};

// CFL violation, non-finite value, or an internally inconsistent branch.
class NumericalError : public Error {
public:
    using Error::Error;
};

// A proven order-theoretic invariant failed on computed data.
class AuditError : public Error {
public:
    AuditError(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : Error(format(key, line, what)), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string msg = "config";
        if (line > 0) msg += " line " + std::to_string(line);
        if (!key.empty()) msg += " key '" + key + "'";
        return msg + ": " + what;
    }

    std::string key_;
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mfgeq
