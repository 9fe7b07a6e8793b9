#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sirf {

/// The input was rejected before any computation started: malformed model
/// file, expression syntax error, parameters out of range, initial state
/// outside the simplex.  Maps to process exit code 2.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that started could not be completed: domain error while
/// evaluating an expression, adaptive step-size underflow, a scenario
/// construction that failed its own consistency check.  Maps to process
/// exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression syntax error.  Carries the byte offset of the first token
/// that could not be consumed plus the set of tokens that would have been
/// accepted there.
class ParseError : public SpecError {
public:
    ParseError(const std::string& message, std::size_t offset,
               std::vector<std::string> expected)
        : SpecError(message), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Domain error raised while evaluating an expression (log of a negative
/// number, zero divisor, ...).  Carries the byte offset of the offending
/// node in the original source text.
class EvalError : public NumericError {
public:
    EvalError(const std::string& message, std::size_t offset)
        : NumericError(message), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

} // namespace sirf
