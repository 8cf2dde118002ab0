/**
 * Error taxonomy for the certification engine.
 *
 * Every failure that callers are expected to handle is thrown as a CertError
 * carrying a machine-readable code; the what() string stays human-readable.
 * The CLI maps InvalidInput to exit code 2 and everything else to 1.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace decaycert {

enum class ErrorCode {
  InvalidInput,       // malformed file, bad matrix shape, failed validation
  NonIntegerSlope,    // a log-log fit did not land near an integer exponent
  NoSolution,         // an exact linear solve had no solution
  RegimeMismatch,     // a functional was evaluated outside its frequency regime
  StepTooLarge,       // integrator step violates the stability bound
  InsufficientDecay,  // trajectory did not decay enough for a reliable fit
  KalmanViolated,     // structural algorithm invoked on a non-certifiable system
  NotRankOne,         // rank-one fast path invoked on a dissipation of higher rank
  NotEquivalent,      // functional failed to be comparable to the energy
  Internal,           // broken invariant; indicates a bug, not bad input
};

/** Convert an error code to its stable identifier (used in JSON output). */
inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonIntegerSlope: return "NonIntegerSlope";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InsufficientDecay: return "InsufficientDecay";
    case ErrorCode::KalmanViolated: return "KalmanViolated";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class CertError : public std::runtime_error {
 public:
  CertError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code),
        msg_(msg) {}

  ErrorCode code() const { return code_; }

  /** Message without the code prefix (for rewrapping with added context). */
  const std::string& msg() const { return msg_; }

 private:
  ErrorCode code_;
  std::string msg_;
};

}  // namespace decaycert
