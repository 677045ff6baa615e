#pragma once

#include <string>
#include <vector>

#include "takumlab/convert_bench.hpp"

namespace takumlab {

/// log10 of a positive rational, accurate to double precision even when
/// the value itself is far outside double range.
double approx_log10(const mpq_class& q);

/// Cumulative-error-distribution panel: percent of matrices on the x
/// axis, log10 of the relative error on the y axis, with an "inf" band
/// above the finite range for out-of-range matrices.
std::string render_cdf_chart(const std::string& title,
                             const std::vector<CdfSeries>& series);

/// Dynamic-range chart: bit width on the x axis, log10 of the value
/// range on the y axis; one min and one max line per format family plus
/// point markers for the fixed-width formats.
std::string render_range_chart(const RangeTable& table);

}  // namespace takumlab
