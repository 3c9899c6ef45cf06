// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/error.hpp"

namespace hyperspline {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfDomain: return "out_of_domain";
    case ErrorCode::IndexOutOfRange: return "index_out_of_range";
    case ErrorCode::IrregularSpacing: return "irregular_spacing";
    case ErrorCode::TooFewPoints: return "too_few_points";
    case ErrorCode::InvalidGrid: return "invalid_grid";
    case ErrorCode::UnsupportedDimension: return "unsupported_dimension";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::MissingHeader: return "missing_header";
    case ErrorCode::IncompleteGrid: return "incomplete_grid";
    case ErrorCode::NonFiniteValue: return "non_finite_value";
    case ErrorCode::MalformedInput: return "malformed_input";
    case ErrorCode::BadMagic: return "bad_magic";
    case ErrorCode::VersionMismatch: return "version_mismatch";
    case ErrorCode::FingerprintMismatch: return "fingerprint_mismatch";
    case ErrorCode::TruncatedFile: return "truncated_file";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace hyperspline
