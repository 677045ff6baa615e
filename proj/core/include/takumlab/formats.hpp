#pragma once

#include <string>
#include <vector>

#include "takumlab/exact_real.hpp"
#include "takumlab/minifloat.hpp"

namespace takumlab {

/// Every machine number format the laboratory can convert through.
enum class FormatId {
  Takum8,
  Takum16,
  Takum32,
  Takum64,
  Posit8,
  Posit16,
  Posit32,
  Posit64,
  E4M3,
  E5M2,
  Float16,
  BFloat16,
  Float32,
  Float64,
};

std::string format_name(FormatId f);

/// Accepts the names produced by format_name ("takum8", "e4m3", ...).
/// Throws UsageError on unknown names.
FormatId parse_format(const std::string& name);

int format_width(FormatId f);

/// Round-trip a value through the format: encode with the format's
/// rounding rule, decode back to an exact value. Overflowing IEEE-style
/// formats returns infinities/NaR; takums and posits saturate.
ExtendedReal convert_through(FormatId f, const ExtendedReal& v);

/// The formats of the conversion benchmark, in output order:
/// takum 8/16/32, posit 8/16/32, e4m3, e5m2, float16, bfloat16, float32.
const std::vector<FormatId>& benchmark_formats();

/// All parseable formats.
const std::vector<FormatId>& all_formats();

/// Minifloat layout of the IEEE-style formats; throws for takum/posit.
MiniFloatSpec minifloat_spec(FormatId f);

}  // namespace takumlab
