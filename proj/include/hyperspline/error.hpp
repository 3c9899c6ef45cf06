// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperspline {

enum class ErrorCode {
  OutOfDomain,
  IndexOutOfRange,
  IrregularSpacing,
  TooFewPoints,
  InvalidGrid,
  UnsupportedDimension,
  Singular,
  DimensionMismatch,
  MissingHeader,
  IncompleteGrid,
  NonFiniteValue,
  MalformedInput,
  BadMagic,
  VersionMismatch,
  FingerprintMismatch,
  TruncatedFile,
  Io,
};

/// Stable snake_case token, used in CSV error columns and CLI messages.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperspline
