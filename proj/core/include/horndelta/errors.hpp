#pragma once

#include <stdexcept>
#include <string>

namespace horndelta {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad row arity, empty field, bad number); carries a
// 1-based line number when it comes from a line-oriented stream.
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_number(0) {}
    std::size_t line_number;
};

struct ConfigError : Error {
    using Error::Error;
};

// An internal invariant was violated; signals an engine bug, not bad input.
struct ConsistencyError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace horndelta
