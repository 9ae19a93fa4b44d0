#pragma once

#include <stdexcept>
#include <string>

namespace hybridosc {

/// Population escaped into the truncation band; raise n_max.
struct LeakageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Density matrix drifted away from a valid (trace-one, positive) state.
struct CptpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HeraldImpossibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AliasError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& what_)
        : std::runtime_error("parse error at line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

}  // namespace hybridosc
