#pragma once

#include <stdexcept>
#include <string>

namespace tausolve {

enum class Err {
    DegenerateInput,
    DenominatorCapExceeded,
    ExtensionCapExceeded,
    SingularMatrix,
    LangSearchExhausted,
    NotInvertible,
    RootChoiceAmbiguous,
    NotBlockTriangular,
    NilpotencyBoundExceeded,
    UnsupportedShape,
    TailNotDominated,
    MismatchDetected,
    DimensionMismatch,
    BasesInequivalent,
    HypothesisViolated,
    InfeasibleCell,
    ParseError,
    Internal,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::DegenerateInput: return "DegenerateInput";
        case Err::DenominatorCapExceeded: return "DenominatorCapExceeded";
        case Err::ExtensionCapExceeded: return "ExtensionCapExceeded";
        case Err::SingularMatrix: return "SingularMatrix";
        case Err::LangSearchExhausted: return "LangSearchExhausted";
        case Err::NotInvertible: return "NotInvertible";
        case Err::RootChoiceAmbiguous: return "RootChoiceAmbiguous";
        case Err::NotBlockTriangular: return "NotBlockTriangular";
        case Err::NilpotencyBoundExceeded: return "NilpotencyBoundExceeded";
        case Err::UnsupportedShape: return "UnsupportedShape";
        case Err::TailNotDominated: return "TailNotDominated";
        case Err::MismatchDetected: return "MismatchDetected";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::BasesInequivalent: return "BasesInequivalent";
        case Err::HypothesisViolated: return "HypothesisViolated";
        case Err::InfeasibleCell: return "InfeasibleCell";
        case Err::ParseError: return "ParseError";
        case Err::Internal: return "Internal";
    }
    return "Unknown";
}

/// Library-wide exception; carries a machine-readable error code.
class TsError : public std::runtime_error {
public:
    TsError(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw TsError(code, what); }

} // namespace tausolve
