#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdisac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedLength : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DelayOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidProbability : public Error {
public:
    using Error::Error;
};

class LagOutOfRange : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Carries every violated invariant found while validating a config document.
class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    explicit ConfigInvalid(const std::string& msg) : Error(msg), violations_{msg} {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) {
            out += "\n  - " + s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace fdisac
