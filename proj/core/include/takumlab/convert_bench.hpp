#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "takumlab/exact_real.hpp"
#include "takumlab/formats.hpp"
#include "takumlab/matrix_market.hpp"

namespace takumlab {

/// Relative 2-norm error of one matrix under one format.
struct ErrorRecord {
  std::string matrix_id;
  FormatId format;
  ErrorValue rel_error;
};

/// Ascending per-format error distribution; point k is ((k+1)/N, e_k)
/// with infinite errors occupying the final ranks.
struct CdfSeries {
  FormatId format;
  struct Point {
    mpq_class percent;  // rank / N in (0, 1]
    ErrorValue rel_error;
  };
  std::vector<Point> points;
};

/// Converts every stored entry of m through each format and measures the
/// relative 2-norm error against the exact entries. Throws DataError for
/// an all-zero matrix.
std::vector<ErrorRecord> bench_matrix(const SparseMatrix& m,
                                      const std::vector<FormatId>& formats);

struct BenchResult {
  std::vector<ErrorRecord> records;  // sorted by (matrix_id, format order)
  std::vector<std::pair<std::string, std::string>> skipped;  // (id, reason)
};

/// Runs bench_matrix over the whole set with up to `jobs` worker threads.
/// Output is deterministic: records are post-sorted by (matrix_id,
/// position of the format in `formats`), skips are sorted by id.
BenchResult run_bench(const std::vector<SparseMatrix>& matrices,
                      const std::vector<FormatId>& formats, int jobs = 1);

CdfSeries build_cdf(const std::vector<ErrorRecord>& records_of_one_format);

/// Fraction of points with rel_error strictly below the threshold.
mpq_class stability_fraction(const CdfSeries& series, const mpq_class& threshold);

/// Dynamic ranges per requested width (takum, posit and the IEEE-style
/// layout of the same width) plus the fixed-width rows for bfloat16,
/// E4M3 and E5M2. The E4M3 row carries both the OFP8 maximum (448) and
/// the IEEE-reserved-exponent reading (240) under the figure columns.
struct RangeTable {
  struct WidthRow {
    int n;
    ExtendedReal takum_min, takum_max;
    ExtendedReal posit_min, posit_max;
    ExtendedReal ieee_normal_min, ieee_max, ieee_subnormal_min;
  };
  struct FixedRow {
    std::string format;
    int n;
    ExtendedReal min_subnormal, min_normal, max_finite;
    std::string figure_min, figure_max;  // chart coordinates, verbatim
  };
  std::vector<WidthRow> widths;
  std::vector<FixedRow> fixed;
};

RangeTable dynamic_range_table(const std::vector<int>& widths);

/// CSV schema A: matrix_id,format,rel_error
void write_errors_csv(std::ostream& os, const std::vector<ErrorRecord>& records);

/// CSV schema B: format,percent,rel_error
void write_cdf_csv(std::ostream& os, const std::vector<CdfSeries>& series);

/// CSV schema C: a width table (n + per-format min/max columns) followed
/// by the fixed-format block.
void write_range_csv(std::ostream& os, const RangeTable& table);

}  // namespace takumlab
