// Command line front end: number format inspection, the dynamic-range
// table, the matrix conversion benchmark and the instruction-set tooling.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "takumlab/collection.hpp"
#include "takumlab/convert_bench.hpp"
#include "takumlab/errors.hpp"
#include "takumlab/isa.hpp"
#include "takumlab/posit.hpp"
#include "takumlab/svg.hpp"
#include "takumlab/takum.hpp"

namespace fs = std::filesystem;
using namespace takumlab;

namespace {

std::string data_dir() {
  if (const char* env = std::getenv("TAKUMLAB_DATA"); env && *env) return env;
  return TAKUMLAB_DEFAULT_DATA_DIR;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

std::string bit_string(std::uint64_t bits, int n) {
  if (n == 0) return "(none)";
  std::string s;
  for (int i = n - 1; i >= 0; --i) s += ((bits >> i) & 1) ? '1' : '0';
  return s;
}

std::uint64_t parse_bits(const std::string& tok) {
  std::uint64_t v = 0;
  std::size_t pos = 0;
  v = std::stoull(tok, &pos, 0);
  if (pos != tok.size()) throw UsageError("cannot parse bit pattern: " + tok);
  return v;
}

ExtendedReal parse_value_token(const std::string& tok) {
  if (tok == "inf") return ExtendedReal::pos_inf();
  if (tok == "-inf") return ExtendedReal::neg_inf();
  if (tok == "nar" || tok == "nan") return ExtendedReal::nar();
  try {
    std::size_t pos = 0;
    double d = std::stod(tok, &pos);
    if (pos == tok.size()) return ExtendedReal::from_double(d);
  } catch (...) {
  }
  throw UsageError("cannot parse value: " + tok);
}

std::string describe_value(const ExtendedReal& v) {
  if (!v.is_finite()) return v.to_string();
  if (v.is_zero()) return "0";
  return v.rational().get_str() + " (" + decimal17(v.rational()) + ")";
}

void cmd_inspect(const std::string& format, const std::string& input, bool as_value) {
  FormatId f = parse_format(format);
  bool is_bits = !as_value && (input.rfind("0x", 0) == 0 || input.rfind("0b", 0) == 0);
  int width = format_width(f);

  switch (f) {
    case FormatId::Takum8:
    case FormatId::Takum16:
    case FormatId::Takum32:
    case FormatId::Takum64: {
      TakumBits t = is_bits ? TakumBits(width, parse_bits(input))
                            : takum_encode(parse_value_token(input), width);
      std::cout << format_name(f) << " bits=0x" << std::hex << t.bits << std::dec
                << "\n";
      if (t.is_zero()) {
        std::cout << "zero\n";
      } else if (t.is_nar()) {
        std::cout << "NaR\n";
      } else {
        DecodedTakum d = takum_fields(t);
        std::cout << "S=" << d.sign << " D=" << d.direction
                  << " R=" << bit_string(d.regime, 3)
                  << " C=" << bit_string(d.characteristic_bits, d.r)
                  << " F=" << bit_string(d.fraction_bits, d.p) << " c=" << d.characteristic
                  << " p=" << d.p << "\n";
        std::cout << "value=" << describe_value(takum_decode(t)) << "\n";
      }
      ExtendedReal round_trip = takum_decode(t);
      std::cout << "round-trip bits=0x" << std::hex
                << takum_encode(round_trip, width).bits << std::dec << "\n";
      break;
    }
    case FormatId::Posit8:
    case FormatId::Posit16:
    case FormatId::Posit32:
    case FormatId::Posit64: {
      PositBits p = is_bits ? PositBits(width, parse_bits(input))
                            : posit_encode(parse_value_token(input), width);
      std::cout << format_name(f) << " bits=0x" << std::hex << p.bits << std::dec
                << "\n";
      if (p.is_zero()) std::cout << "zero\n";
      else if (p.is_nar()) std::cout << "NaR\n";
      else std::cout << "value=" << describe_value(posit_decode(p)) << "\n";
      std::cout << "round-trip bits=0x" << std::hex
                << posit_encode(posit_decode(p), width).bits << std::dec << "\n";
      break;
    }
    default: {
      MiniFloatSpec spec = minifloat_spec(f);
      MiniFloatBits b = is_bits ? MiniFloatBits(spec, parse_bits(input))
                                : mf_encode(parse_value_token(input), spec);
      std::cout << spec.name << " bits=0x" << std::hex << b.bits << std::dec << "\n";
      std::uint64_t frac = b.bits & ((std::uint64_t{1} << spec.frac_bits) - 1);
      std::uint64_t exp = (b.bits >> spec.frac_bits) & ((std::uint64_t{1} << spec.exp_bits) - 1);
      std::uint64_t sign = b.bits >> (spec.exp_bits + spec.frac_bits);
      std::cout << "S=" << sign << " E=" << bit_string(exp, spec.exp_bits)
                << " F=" << bit_string(frac, spec.frac_bits) << "\n";
      ExtendedReal v = mf_decode(b);
      if (v.is_nar()) std::cout << "NaN\n";
      else std::cout << "value=" << describe_value(v) << "\n";
      std::cout << "round-trip bits=0x" << std::hex << mf_encode(v, spec).bits
                << std::dec << "\n";
      break;
    }
  }
}

void cmd_range(const std::vector<int>& widths, const std::string& out,
               const std::string& svg) {
  RangeTable table = dynamic_range_table(widths);
  std::ostringstream csv;
  write_range_csv(csv, table);
  if (out.empty()) std::cout << csv.str();
  else write_file(out, csv.str());
  if (!svg.empty()) write_file(svg, render_range_chart(table));
}

struct BenchArgs {
  std::string index_path;
  std::vector<std::string> formats;
  std::vector<int> widths;
  long max_nnz = 50000;
  std::string cache_dir;
  bool offline = false;
  bool refresh = false;
  int jobs = 1;
  double threshold = 1.0;
  std::string out, cdf_out, manifest_out, svg_prefix;
};

void cmd_bench(const BenchArgs& args) {
  std::vector<FormatId> formats;
  if (args.formats.empty()) {
    formats = benchmark_formats();
  } else {
    for (const std::string& name : args.formats) formats.push_back(parse_format(name));
  }
  if (!args.widths.empty()) {
    std::vector<FormatId> filtered;
    for (FormatId f : formats)
      for (int w : args.widths)
        if (format_width(f) == w) {
          filtered.push_back(f);
          break;
        }
    formats = std::move(filtered);
  }
  if (formats.empty()) throw UsageError("no formats selected");
  if (args.threshold <= 0) throw UsageError("threshold must be positive");

  CollectionIndex index = load_collection_index_file(args.index_path);
  FetchOptions opt;
  opt.max_nnz = args.max_nnz;
  opt.cache_dir = args.cache_dir;
  opt.offline = args.offline;
  opt.refresh = args.refresh;
  opt.jobs = args.jobs;
  CollectionResult collection = fetch_collection(index, opt);

  if (args.offline) {
    std::vector<std::string> missing;
    for (const ManifestEntry& e : collection.manifest)
      if (!e.included && e.reason.find("missing from cache") != std::string::npos)
        missing.push_back(e.id);
    if (!collection.matrices.empty() && !missing.empty()) {
      std::cerr << "note: " << missing.size()
                << " matrices missing from the cache (offline):";
      for (const std::string& id : missing) std::cerr << ' ' << id;
      std::cerr << "\n";
    }
    if (collection.matrices.empty()) {
      std::string names;
      for (const std::string& id : missing) names += ' ' + id;
      throw DataError("offline run with a cold cache; missing matrices:" + names);
    }
  }
  if (collection.matrices.empty()) throw DataError("no matrices selected");

  BenchResult bench = run_bench(collection.matrices, formats, args.jobs);

  std::ostringstream errors_csv;
  write_errors_csv(errors_csv, bench.records);
  if (args.out.empty()) std::cout << errors_csv.str();
  else write_file(args.out, errors_csv.str());

  std::vector<CdfSeries> cdfs;
  for (FormatId f : formats) {
    std::vector<ErrorRecord> of_format;
    for (const ErrorRecord& r : bench.records)
      if (r.format == f) of_format.push_back(r);
    if (!of_format.empty()) cdfs.push_back(build_cdf(of_format));
  }
  if (!args.cdf_out.empty()) {
    std::ostringstream cdf_csv;
    write_cdf_csv(cdf_csv, cdfs);
    write_file(args.cdf_out, cdf_csv.str());
  }
  if (!args.manifest_out.empty()) {
    std::ostringstream m;
    write_manifest_csv(m, collection.manifest);
    write_file(args.manifest_out, m.str());
  }
  if (!args.svg_prefix.empty()) {
    for (int w : {8, 16, 32, 64}) {
      std::vector<CdfSeries> panel;
      for (const CdfSeries& s : cdfs)
        if (format_width(s.format) == w) panel.push_back(s);
      if (panel.empty()) continue;
      std::ostringstream title;
      title << "relative conversion error, " << w << "-bit formats";
      write_file(args.svg_prefix + "_w" + std::to_string(w) + ".svg",
                 render_cdf_chart(title.str(), panel));
    }
  }

  std::ostream& info = args.out.empty() ? std::cerr : std::cout;
  info << "matrices: " << collection.matrices.size() << " included, "
       << collection.manifest.size() - collection.matrices.size() << " excluded\n";
  mpq_class threshold(args.threshold);
  for (const CdfSeries& s : cdfs) {
    mpq_class frac = stability_fraction(s, threshold);
    info << "stability " << format_name(s.format) << " "
         << decimal_sig(frac * 100, 4) << "% below threshold "
         << args.threshold << "\n";
  }
}

struct IsaArgs {
  std::string action;
  std::vector<std::string> mnemonics;
  std::string groups_path, list_path, out;
};

void cmd_isa(const IsaArgs& args) {
  IsaTables tables = IsaTables::load(args.groups_path, args.list_path);
  std::ostringstream os;
  if (args.action == "stats") {
    CategoryCounts counts = tables.legacy_counts();
    os << "total," << counts.total << "\n";
    for (const auto& [cat, n] : counts.per_category)
      os << category_name(cat) << ',' << n << "\n";
  } else if (args.action == "classify") {
    if (args.mnemonics.empty()) {
      write_classification_csv(os, tables);
    } else {
      os << "mnemonic,group,category\n";
      for (const std::string& m : args.mnemonics) {
        Classification c = tables.classify(m);
        os << m << ',' << c.group->id << ',' << category_name(c.group->category)
           << '\n';
      }
    }
  } else if (args.action == "rewrite") {
    if (args.mnemonics.empty())
      throw UsageError("isa rewrite needs at least one mnemonic");
    os << "mnemonic,proposed,note\n";
    for (const std::string& m : args.mnemonics) {
      RewriteResult r = tables.rewrite(m);
      if (r.proposed.empty()) {
        os << m << ",," << r.drop_reason << '\n';
      } else {
        std::string joined;
        for (const std::string& p : r.proposed) {
          if (!joined.empty()) joined += ';';
          joined += p;
        }
        os << m << ',' << joined << ",\n";
      }
    }
  } else if (args.action == "enumerate") {
    for (const std::string& p : tables.enumerate_proposed()) os << p << '\n';
  } else if (args.action == "enumerate-legacy") {
    for (const std::string& m : tables.legacy_list()) os << m << '\n';
  } else if (args.action == "diff") {
    write_diff_csv(os, tables.diff());
  } else if (args.action == "diff-text") {
    write_diff_text(os, tables.diff());
  } else {
    throw UsageError("unknown isa action: " + args.action);
  }
  if (args.out.empty()) std::cout << os.str();
  else write_file(args.out, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"takumlab: takum/posit/minifloat conversion laboratory and "
               "AVX10.2 instruction renaming tool"};
  app.require_subcommand(1);

  // inspect
  std::string ins_format, ins_input;
  bool ins_value = false;
  auto* inspect = app.add_subcommand("inspect", "decode or encode one value");
  inspect->add_option("format", ins_format, "format name, e.g. takum8")->required();
  inspect->add_option("input", ins_input, "bit pattern (0x..) or decimal value")
      ->required();
  inspect->add_flag("--value", ins_value, "force value interpretation");

  // range
  std::vector<int> range_widths{8, 16, 32, 64};
  std::string range_out, range_svg;
  auto* range = app.add_subcommand("range", "dynamic range table (CSV/SVG)");
  range->add_option("--widths", range_widths, "bit widths")
      ->delimiter(',')
      ->check(CLI::IsMember({8, 16, 32, 64}));
  range->add_option("--out", range_out, "CSV output path (default stdout)");
  range->add_option("--svg", range_svg, "SVG chart output path");

  // bench
  BenchArgs bench;
  bench.index_path = data_dir() + "/collection_index.csv";
  bench.cache_dir = data_dir() + "/matrices";
  auto* b = app.add_subcommand("bench", "matrix conversion error benchmark");
  b->add_option("--index", bench.index_path, "collection index CSV");
  b->add_option("--formats", bench.formats, "formats to benchmark")->delimiter(',');
  b->add_option("--widths", bench.widths, "restrict formats to widths")
      ->delimiter(',')
      ->check(CLI::IsMember({8, 16, 32, 64}));
  b->add_option("--max-nnz", bench.max_nnz, "largest admitted nonzero count")
      ->capture_default_str();
  b->add_option("--cache-dir", bench.cache_dir,
                "matrix cache root (TAKUMLAB_CACHE overrides the default)");
  b->add_flag("--offline", bench.offline, "never touch the network");
  b->add_flag("--refresh", bench.refresh, "re-download cached archives");
  b->add_option("--jobs", bench.jobs, "worker threads")->capture_default_str();
  b->add_option("--threshold", bench.threshold, "stability threshold")
      ->capture_default_str();
  b->add_option("--out", bench.out, "error CSV path (default stdout)");
  b->add_option("--cdf-out", bench.cdf_out, "cumulative distribution CSV path");
  b->add_option("--manifest-out", bench.manifest_out, "manifest CSV path");
  b->add_option("--svg", bench.svg_prefix, "per-width CDF chart path prefix");

  // isa
  IsaArgs isa;
  isa.groups_path = data_dir() + "/isa_groups.txt";
  isa.list_path = data_dir() + "/avx10_legacy.txt";
  auto* i = app.add_subcommand("isa", "instruction set classification and renaming");
  i->add_option("action", isa.action,
                "stats | classify | rewrite | enumerate | enumerate-legacy | "
                "diff | diff-text")
      ->required();
  i->add_option("mnemonics", isa.mnemonics, "mnemonics for classify/rewrite");
  i->add_option("--groups", isa.groups_path, "group table file");
  i->add_option("--list", isa.list_path, "legacy instruction list file");
  i->add_option("--out", isa.out, "output path (default stdout)");

  if (const char* env = std::getenv(kCacheEnvVar); env && *env)
    bench.cache_dir = env;

  try {
    app.parse(argc, argv);
    if (*inspect) cmd_inspect(ins_format, ins_input, ins_value);
    if (*range) cmd_range(range_widths, range_out, range_svg);
    if (*b) cmd_bench(bench);
    if (*i) cmd_isa(isa);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
