#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ric {

enum class Errc {
  DuplicateEdge,
  SelfLoop,
  EndpointOutOfRange,
  UnknownNode,
  EdgeExists,
  TooSmall,
  TooLarge,
  NotSparse,
  NotLaman,
  IllegalMove,
  ReceiptMismatch,
  NoLegalMoves,
  TargetNotInLegalSet,
  NonFinite,
  ShapeMismatch,
  MaxStepsExceeded,
  RetryBudgetExhausted,
  EmptySample,
  DodIntractable,
  InvalidConfig,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::EndpointOutOfRange: return "EndpointOutOfRange";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::EdgeExists: return "EdgeExists";
    case Errc::TooSmall: return "TooSmall";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotSparse: return "NotSparse";
    case Errc::NotLaman: return "NotLaman";
    case Errc::IllegalMove: return "IllegalMove";
    case Errc::ReceiptMismatch: return "ReceiptMismatch";
    case Errc::NoLegalMoves: return "NoLegalMoves";
    case Errc::TargetNotInLegalSet: return "TargetNotInLegalSet";
    case Errc::NonFinite: return "NonFinite";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::MaxStepsExceeded: return "MaxStepsExceeded";
    case Errc::RetryBudgetExhausted: return "RetryBudgetExhausted";
    case Errc::EmptySample: return "EmptySample";
    case Errc::DodIntractable: return "DodIntractable";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ric
