#pragma once

#include <stdexcept>
#include <string>

namespace qbsk {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the Jackson series when max_terms is hit before the tail bound.
struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DepthExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    int column;  // 1-based
    std::string expected;
    ParseError(int col, std::string what_expected)
        : std::runtime_error("parse error at column " + std::to_string(col) +
                             ": expected " + what_expected),
          column(col),
          expected(std::move(what_expected)) {}
};

struct MissingDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_name, const std::string& reason)
        : std::runtime_error(field_name + ": " + reason), field(std::move(field_name)) {}
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qbsk
