#pragma once

#include <stdexcept>
#include <string>

namespace lsym {

enum class ErrorCode {
    ZeroDenominator,
    SyntaxError,
    HigherDerivativeOnRHS,
    NotPolynomialInGenerators,
    Undecided,
    SingularJacobian,
    InverseNotValid,
    NotSolvable,
    NotRationalInYPrime,
    EmptyResult,
    InsufficientBasis,
    NoMatchInBasis,
    PoleEncountered,
    NonFiniteState,
    CorpusParseError,
    NotASymmetry,
    BadInput,
};

/// Name of the code as it appears in machine-readable output.
const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure. Carries the byte offset into the input and the set of
/// tokens that would have been accepted at that point.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected, std::string msg)
        : Error(ErrorCode::SyntaxError, std::move(msg)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

}  // namespace lsym
