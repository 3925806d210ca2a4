#include "lsym/error.hpp"

namespace lsym {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::HigherDerivativeOnRHS: return "HigherDerivativeOnRHS";
        case ErrorCode::NotPolynomialInGenerators: return "NotPolynomialInGenerators";
        case ErrorCode::Undecided: return "Undecided";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::InverseNotValid: return "InverseNotValid";
        case ErrorCode::NotSolvable: return "NotSolvable";
        case ErrorCode::NotRationalInYPrime: return "NotRationalInYPrime";
        case ErrorCode::EmptyResult: return "EmptyResult";
        case ErrorCode::InsufficientBasis: return "InsufficientBasis";
        case ErrorCode::NoMatchInBasis: return "NoMatchInBasis";
        case ErrorCode::PoleEncountered: return "PoleEncountered";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::CorpusParseError: return "CorpusParseError";
        case ErrorCode::NotASymmetry: return "NotASymmetry";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

}  // namespace lsym
