#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmc {

enum class ErrorCode {
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  DegenerateFrame,
  NonLorentzMetric,
  StencilOutOfDomain,
  InvariantViolation,
  NearNullSlope,
  NegativeRadicand,
  NonpositiveProfile,
  ZeroDerivativeProfile,
  CaseMismatch,
  QuadratureFailure,
  Usage,
  Io,
};

/// Machine-parsable name used in `ERROR[<code>]` diagnostics.
constexpr std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "syntax-error";
    case ErrorCode::UnknownIdentifier: return "unknown-identifier";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::DegenerateFrame: return "degenerate-frame";
    case ErrorCode::NonLorentzMetric: return "non-lorentz-metric";
    case ErrorCode::StencilOutOfDomain: return "stencil-out-of-domain";
    case ErrorCode::InvariantViolation: return "invariant-violation";
    case ErrorCode::NearNullSlope: return "near-null-slope";
    case ErrorCode::NegativeRadicand: return "negative-radicand";
    case ErrorCode::NonpositiveProfile: return "nonpositive-profile";
    case ErrorCode::ZeroDerivativeProfile: return "zero-derivative-profile";
    case ErrorCode::CaseMismatch: return "case-mismatch";
    case ErrorCode::QuadratureFailure: return "quadrature-failure";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; `offset` is the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// An expression could not be evaluated (or differentiated) at `u`.
class DomainError : public Error {
 public:
  DomainError(double u, const std::string& message)
      : Error(ErrorCode::DomainError, message + " at u=" + std::to_string(u)),
        u_(u) {}

  double u() const noexcept { return u_; }

 private:
  double u_;
};

}  // namespace cmc
