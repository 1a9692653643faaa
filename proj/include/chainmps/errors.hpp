// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chainmps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Lanczos/block-Lanczos recursion lost rank before the chain completed.
struct BreakdownError : Error {
    int step;
    BreakdownError(int step_, const std::string& what_)
        : Error(what_), step(step_) {}
};

struct DegenerateSeedError : Error {
    using Error::Error;
};

struct NumericalFailure : Error {
    using Error::Error;
};

// Collects every violation found while parsing a config file.
struct ConfigError : Error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> issues_)
        : Error(join(issues_)), issues(std::move(issues_)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& e : v) {
            if (!s.empty()) s += "\n";
            s += e;
        }
        return s;
    }
};

} // namespace chainmps
