#include "takumlab/formats.hpp"

#include <algorithm>

#include "takumlab/errors.hpp"
#include "takumlab/posit.hpp"
#include "takumlab/takum.hpp"

namespace takumlab {

std::string format_name(FormatId f) {
  switch (f) {
    case FormatId::Takum8: return "takum8";
    case FormatId::Takum16: return "takum16";
    case FormatId::Takum32: return "takum32";
    case FormatId::Takum64: return "takum64";
    case FormatId::Posit8: return "posit8";
    case FormatId::Posit16: return "posit16";
    case FormatId::Posit32: return "posit32";
    case FormatId::Posit64: return "posit64";
    case FormatId::E4M3: return "e4m3";
    case FormatId::E5M2: return "e5m2";
    case FormatId::Float16: return "float16";
    case FormatId::BFloat16: return "bfloat16";
    case FormatId::Float32: return "float32";
    case FormatId::Float64: return "float64";
  }
  throw UsageError("unknown format id");
}

FormatId parse_format(const std::string& name) {
  for (FormatId f : all_formats())
    if (format_name(f) == name) return f;
  throw UsageError("unknown format '" + name +
                   "' (expected e.g. takum8, posit16, e4m3, bfloat16, float32)");
}

int format_width(FormatId f) {
  switch (f) {
    case FormatId::Takum8:
    case FormatId::Posit8:
    case FormatId::E4M3:
    case FormatId::E5M2:
      return 8;
    case FormatId::Takum16:
    case FormatId::Posit16:
    case FormatId::Float16:
    case FormatId::BFloat16:
      return 16;
    case FormatId::Takum32:
    case FormatId::Posit32:
    case FormatId::Float32:
      return 32;
    case FormatId::Takum64:
    case FormatId::Posit64:
    case FormatId::Float64:
      return 64;
  }
  throw UsageError("unknown format id");
}

MiniFloatSpec minifloat_spec(FormatId f) {
  switch (f) {
    case FormatId::E4M3: return MiniFloatSpec::e4m3();
    case FormatId::E5M2: return MiniFloatSpec::e5m2();
    case FormatId::Float16: return MiniFloatSpec::float16();
    case FormatId::BFloat16: return MiniFloatSpec::bfloat16();
    case FormatId::Float32: return MiniFloatSpec::float32();
    case FormatId::Float64: return MiniFloatSpec::float64();
    default:
      throw UsageError(format_name(f) + " is not an IEEE-style format");
  }
}

ExtendedReal convert_through(FormatId f, const ExtendedReal& v) {
  switch (f) {
    case FormatId::Takum8:
    case FormatId::Takum16:
    case FormatId::Takum32:
    case FormatId::Takum64:
      return takum_decode(takum_encode(v, format_width(f)));
    case FormatId::Posit8:
    case FormatId::Posit16:
    case FormatId::Posit32:
    case FormatId::Posit64:
      return posit_decode(posit_encode(v, format_width(f)));
    default:
      return mf_decode(mf_encode(v, minifloat_spec(f)));
  }
}

const std::vector<FormatId>& benchmark_formats() {
  static const std::vector<FormatId> kFormats = {
      FormatId::Takum8,  FormatId::Takum16,  FormatId::Takum32,
      FormatId::Posit8,  FormatId::Posit16,  FormatId::Posit32,
      FormatId::E4M3,    FormatId::E5M2,     FormatId::Float16,
      FormatId::BFloat16, FormatId::Float32,
  };
  return kFormats;
}

const std::vector<FormatId>& all_formats() {
  static const std::vector<FormatId> kFormats = {
      FormatId::Takum8,  FormatId::Takum16, FormatId::Takum32,
      FormatId::Takum64, FormatId::Posit8,  FormatId::Posit16,
      FormatId::Posit32, FormatId::Posit64, FormatId::E4M3,
      FormatId::E5M2,    FormatId::Float16, FormatId::BFloat16,
      FormatId::Float32, FormatId::Float64,
  };
  return kFormats;
}

}  // namespace takumlab
