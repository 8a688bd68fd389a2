#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rectify {

enum class ErrorKind {
    NegativePower,
    ExponentOverflow,
    NonMonomialSubstitution,
    Parse,
    InvalidFactor,
    InvalidEmbedding,
    ResultNotPolynomial,
    XNotMonomial,
    CoordinatePullbackNotT,
    GNotPolynomial,
    NonClearable,
    Stalled,
    MaxIters,
    PullbackNotT,
    PreconditionViolated,
    RecipeInapplicable,
    NoRecipeApplies,
    VerificationFailed,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::NegativePower: return "NegativePower";
        case ErrorKind::ExponentOverflow: return "ExponentOverflow";
        case ErrorKind::NonMonomialSubstitution: return "NonMonomialSubstitution";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::InvalidFactor: return "InvalidFactor";
        case ErrorKind::InvalidEmbedding: return "InvalidEmbedding";
        case ErrorKind::ResultNotPolynomial: return "ResultNotPolynomial";
        case ErrorKind::XNotMonomial: return "XNotMonomial";
        case ErrorKind::CoordinatePullbackNotT: return "CoordinatePullbackNotT";
        case ErrorKind::GNotPolynomial: return "GNotPolynomial";
        case ErrorKind::NonClearable: return "NonClearable";
        case ErrorKind::Stalled: return "Stalled";
        case ErrorKind::MaxIters: return "MaxIters";
        case ErrorKind::PullbackNotT: return "PullbackNotT";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::RecipeInapplicable: return "RecipeInapplicable";
        case ErrorKind::NoRecipeApplies: return "NoRecipeApplies";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error tagged with its kind.
/// `details` carries structured follow-up lines (attempt logs, failed checks).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::vector<std::string> details = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind),
          details_(std::move(details)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorKind kind_;
    std::vector<std::string> details_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(ErrorKind::Parse, what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace rectify
