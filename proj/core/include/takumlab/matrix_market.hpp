#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "takumlab/exact_real.hpp"

namespace takumlab {

enum class Symmetry : std::uint8_t { General, Symmetric, Skew };

/// Coordinate-form sparse matrix with exact entries. Symmetric and
/// skew-symmetric inputs keep only the stored triangle; nnz counts stored
/// entries, matching the Matrix Market convention.
struct SparseMatrix {
  std::string id;  // collection identifier, "group/name"
  long rows = 0;
  long cols = 0;
  Symmetry symmetry = Symmetry::General;

  struct Entry {
    long row = 0;  // 1-based
    long col = 0;  // 1-based
    ExtendedReal value;
  };
  std::vector<Entry> entries;

  std::size_t nnz() const { return entries.size(); }

  /// Values only, in storage order.
  std::vector<ExtendedReal> values() const;

  /// Largest magnitude over stored entries; Zero for an all-zero matrix.
  ExtendedReal max_abs() const;
};

/// Parses Matrix Market text (coordinate or array, real or integer
/// fields). Decimal literals take their nearest-binary64 value and are
/// exact from there on. Pattern and complex fields and malformed input
/// raise DataError with a line number.
SparseMatrix parse_matrix_market(std::istream& in, const std::string& id = "");

SparseMatrix parse_matrix_market_file(const std::string& path,
                                      const std::string& id = "");

}  // namespace takumlab
