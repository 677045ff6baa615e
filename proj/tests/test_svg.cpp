#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "takumlab/svg.hpp"

using namespace takumlab;

namespace {

// Minimal XML well-formedness check: declaration, balanced tags, quoted
// attributes, no stray '<' or '&'.
bool well_formed_xml(const std::string& doc, std::string* err) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) {
    *err = m + " at offset " + std::to_string(i);
    return false;
  };
  if (doc.rfind("<?xml", 0) != 0) return fail("missing xml declaration");
  i = doc.find("?>");
  if (i == std::string::npos) return fail("unterminated declaration");
  i += 2;
  while (i < doc.size()) {
    char c = doc[i];
    if (c == '<') {
      if (i + 1 >= doc.size()) return fail("dangling '<'");
      bool closing = doc[i + 1] == '/';
      std::size_t start = i + (closing ? 2 : 1);
      std::size_t j = start;
      while (j < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[j])) ||
                                doc[j] == ':' || doc[j] == '-'))
        ++j;
      std::string name = doc.substr(start, j - start);
      if (name.empty()) return fail("empty tag name");
      // scan to the end of the tag, tracking quotes
      bool in_quote = false;
      bool self_close = false;
      while (j < doc.size()) {
        char d = doc[j];
        if (d == '"') in_quote = !in_quote;
        else if (!in_quote && d == '>') break;
        else if (!in_quote && d == '/' && j + 1 < doc.size() && doc[j + 1] == '>') {
          self_close = true;
        } else if (!in_quote && d == '<') {
          return fail("nested '<'");
        }
        ++j;
      }
      if (j >= doc.size()) return fail("unterminated tag");
      if (in_quote) return fail("unterminated attribute");
      if (closing) {
        if (stack.empty() || stack.back() != name)
          return fail("mismatched </" + name + ">");
        stack.pop_back();
      } else if (!self_close) {
        stack.push_back(name);
      }
      i = j + 1;
    } else if (c == '&') {
      static const char* entities[] = {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"};
      bool ok = false;
      for (const char* e : entities)
        if (doc.compare(i, std::string(e).size(), e) == 0) ok = true;
      if (!ok) return fail("bare '&'");
      i = doc.find(';', i) + 1;
    } else if (c == '>') {
      return fail("stray '>'");
    } else {
      ++i;
    }
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return true;
}

CdfSeries sample_series(FormatId f, std::vector<double> errors, int infs) {
  std::vector<ErrorRecord> rs;
  int k = 0;
  for (double e : errors)
    rs.push_back({"m" + std::to_string(k++), f, ErrorValue::finite(mpq_class(e))});
  for (int i = 0; i < infs; ++i)
    rs.push_back({"m" + std::to_string(k++), f, ErrorValue::inf()});
  return build_cdf(rs);
}

}  // namespace

TEST_CASE("approx_log10 stays accurate far outside double range") {
  CHECK(approx_log10(mpq_class(1000)) == doctest::Approx(3.0));
  CHECK(approx_log10(pow2(255)) == doctest::Approx(76.7626).epsilon(1e-6));
  CHECK(approx_log10(pow2(-255)) == doctest::Approx(-76.7626).epsilon(1e-6));
}

TEST_CASE("cdf chart is well-formed and carries every series") {
  std::vector<CdfSeries> series{
      sample_series(FormatId::Takum8, {1e-3, 2e-3, 0.5, 1.5}, 0),
      sample_series(FormatId::E4M3, {1e-2, 0.9}, 2),
      sample_series(FormatId::E5M2, {0.0, 1.0}, 1),
  };
  std::string svg = render_cdf_chart("8-bit formats", series);
  std::string err;
  CHECK_MESSAGE(well_formed_xml(svg, &err), err);
  CHECK(svg.find("takum8") != std::string::npos);
  CHECK(svg.find("e4m3") != std::string::npos);
  CHECK(svg.find("inf") != std::string::npos);  // the out-of-range band
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("range chart is well-formed and includes fixed markers") {
  RangeTable t = dynamic_range_table({8, 16, 32, 64});
  std::string svg = render_range_chart(t);
  std::string err;
  CHECK_MESSAGE(well_formed_xml(svg, &err), err);
  CHECK(svg.find("bfloat16") != std::string::npos);
  CHECK(svg.find("e5m2") != std::string::npos);
  CHECK(svg.find("takum") != std::string::npos);
}

TEST_CASE("special characters are escaped") {
  std::vector<CdfSeries> series{sample_series(FormatId::Float16, {0.25}, 0)};
  std::string svg = render_cdf_chart("a<b & \"c\"", series);
  std::string err;
  CHECK_MESSAGE(well_formed_xml(svg, &err), err);
  CHECK(svg.find("a&lt;b &amp; &quot;c&quot;") != std::string::npos);
}
