#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace freqstab {

enum class ErrorCode {
  InvalidParameter,
  OutOfRange,
  InsufficientSamples,
  NoOnsetFound,
  AmbiguousClassification,
  NoCrossing,
  NoConvergence,
  Infeasible,
  UnstableIntegration,
  DegenerateWeights,
  ParseError,
  SchemaError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Both the power branch and the frequency branch fired at the same time.
class AmbiguousClassificationError : public Error {
 public:
  AmbiguousClassificationError(const std::string& what,
                               std::vector<std::string> candidates)
      : Error(ErrorCode::AmbiguousClassification, what),
        candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept {
    return candidates_;
  }

 private:
  std::vector<std::string> candidates_;
};

// Row and column are 1-based; column 0 means "whole row".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(ErrorCode::ParseError, what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace freqstab
