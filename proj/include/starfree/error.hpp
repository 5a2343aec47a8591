#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace starfree {

enum class ErrorKind {
    alphabet_mismatch,
    monoid_cap_exceeded,
    not_aperiodic,
    invalid_system,
    kind_mismatch,
    digit_out_of_range,
    canonical_form_unknown,
    canonical_form_invalid,
    convergence_failure,
    empty_word,
    unbound_variable,
    not_a_sentence,
    syntax_error,
    shape_violation,
    canonical_not_aperiodic,
    not_zero_closed,
    not_a_power_alphabet,
    preservation_violated,
    verdict_mismatch,
    translation_mismatch,
    invalid_argument,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorKind::monoid_cap_exceeded: return "MonoidCapExceeded";
    case ErrorKind::not_aperiodic: return "NotAperiodic";
    case ErrorKind::invalid_system: return "InvalidSystem";
    case ErrorKind::kind_mismatch: return "KindMismatch";
    case ErrorKind::digit_out_of_range: return "DigitOutOfRange";
    case ErrorKind::canonical_form_unknown: return "CanonicalFormUnknown";
    case ErrorKind::canonical_form_invalid: return "CanonicalFormInvalid";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::empty_word: return "EmptyWord";
    case ErrorKind::unbound_variable: return "UnboundVariable";
    case ErrorKind::not_a_sentence: return "NotASentence";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::shape_violation: return "ShapeViolation";
    case ErrorKind::canonical_not_aperiodic: return "CanonicalNotAperiodic";
    case ErrorKind::not_zero_closed: return "NotZeroClosed";
    case ErrorKind::not_a_power_alphabet: return "NotAPowerAlphabet";
    case ErrorKind::preservation_violated: return "PreservationViolated";
    case ErrorKind::verdict_mismatch: return "VerdictMismatch";
    case ErrorKind::translation_mismatch: return "TranslationMismatch";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

/// All library failures are reported through this exception; `kind()`
/// identifies the failure class for callers that dispatch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace starfree
