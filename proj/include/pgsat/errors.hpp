#pragma once

#include <stdexcept>
#include <string>

namespace pgsat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line, int column)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line), column(column) {}
    int line;
    int column;
};

struct UnsupportedError : Error {
    explicit UnsupportedError(std::string feature)
        : Error("unsupported PDDL feature: " + feature), feature(std::move(feature)) {}
    std::string feature;
};

// Raised when a problem is inconsistent with what the encoders can represent.
struct ModelError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

}  // namespace pgsat
