#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "takumlab/errors.hpp"
#include "takumlab/isa.hpp"

using namespace takumlab;

namespace {
const std::string kGroups = std::string(TAKUMLAB_DATA_DIR) + "/isa_groups.txt";
const std::string kList = std::string(TAKUMLAB_DATA_DIR) + "/avx10_legacy.txt";

const IsaTables& tables() {
  static IsaTables t = IsaTables::load(kGroups, kList);
  return t;
}
}  // namespace

TEST_CASE("expand_pattern") {
  CHECK(expand_pattern("A(B|C)?") == std::vector<std::string>{"A", "AB", "AC"});
  CHECK(expand_pattern("K(ADD|AND)(B|W)") ==
        std::vector<std::string>{"KADDB", "KADDW", "KANDB", "KANDW"});
  CHECK(expand_pattern("VKUNPCK(B8B16|B16B32|B32B64)") ==
        std::vector<std::string>{"VKUNPCKB16B32", "VKUNPCKB32B64", "VKUNPCKB8B16"});
  CHECK(expand_pattern("X") == std::vector<std::string>{"X"});
  CHECK(expand_pattern("(A|A)B").size() == 1);  // languages deduplicate
  CHECK_THROWS_AS(expand_pattern("A*"), DataError);
  CHECK_THROWS_AS(expand_pattern("A+B"), DataError);
  CHECK_THROWS_AS(expand_pattern("A(B"), DataError);
  CHECK_THROWS_AS(expand_pattern("a"), DataError);
}

TEST_CASE("category counts match the published inventory") {
  CategoryCounts c = tables().legacy_counts();
  CHECK(c.total == 756);
  CHECK(c.per_category[IsaCategory::Bitwise] == 220);
  CHECK(c.per_category[IsaCategory::Mask] == 59);
  CHECK(c.per_category[IsaCategory::Integer] == 107);
  CHECK(c.per_category[IsaCategory::FloatingPoint] == 363);
  CHECK(c.per_category[IsaCategory::Cryptographic] == 7);
}

TEST_CASE("classification worked examples") {
  auto cls = [&](const std::string& m) {
    Classification c = tables().classify(m);
    return c.group->id + "," + category_name(c.group->category);
  };
  CHECK(cls("KANDB") == "M01,mask");
  CHECK(cls("VPMOVD2M") == "M03,mask");
  CHECK(cls("VGF2P8MULB") == "C03,cryptographic");
  CHECK(cls("VDIVNEPBF16") == "F04,floating_point");
  CHECK(cls("VADDPH") == "F01,floating_point");
  CHECK(cls("VPMOVM2D") == "M04,mask");
  CHECK(cls("VCVTUSI2SS") == "B02,bitwise");  // printed under the bitwise table
  CHECK(cls("VCVTUSI2SH") == "F07,floating_point");
  CHECK(cls("VPSADBW") == "I01,integer");
  CHECK(cls("VPCLMULQDQ") == "I05,integer");
}

TEST_CASE("every legacy mnemonic classifies into exactly one group") {
  std::map<std::string, int> group_sizes;
  for (const std::string& m : tables().legacy_list()) {
    Classification c = tables().classify(m);  // throws on 0 or 2+ matches
    CHECK(!c.proposed);
    ++group_sizes[c.group->id];
  }
  CHECK(group_sizes.size() == 36);  // 12 B + 4 M + 9 I + 8 F + 3 C
  for (const auto& [id, n] : group_sizes) CHECK(n > 0);
}

TEST_CASE("unclassified mnemonics report nearest patterns") {
  try {
    tables().classify("KANDX");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    std::string what = e.what();
    CHECK(what.find("unclassified") != std::string::npos);
    CHECK(what.find("M01") != std::string::npos);
  }
}

TEST_CASE("rewrite worked examples") {
  auto rw = [&](const std::string& m) { return tables().rewrite(m).proposed; };
  CHECK(rw("KANDW") == std::vector<std::string>{"KANDB16"});
  CHECK(rw("VPMOVM2D") == std::vector<std::string>{"VPMOVM2B32"});
  CHECK(rw("VGF2P8AFFINEQB") == std::vector<std::string>{"VGF2P8AFFINEU64U8"});
  CHECK(rw("KORTESTQ") == std::vector<std::string>{"KORTESTB64"});
  // packed half-precision add generalizes across every takum width
  CHECK(rw("VADDPH") == std::vector<std::string>{"VADDPT16", "VADDPT32",
                                                 "VADDPT64", "VADDPT8"});
  // group-specific special cases
  CHECK(rw("VPACKSSDW") == std::vector<std::string>{"VPACKSS32S16"});
  CHECK(rw("VPMADDUBSW") == std::vector<std::string>{"VPMADDU8S16"});
  CHECK(rw("VPMADDWD") == std::vector<std::string>{"VPMADDS16S32"});
  CHECK(rw("VCVTPH2DQ") == std::vector<std::string>{"VCVTPT162PS32"});
  CHECK(rw("VCVTSI2SH") ==
        std::vector<std::string>{"VCVTSS322ST16", "VCVTSS642ST16"});
  // down-conversions and sign extensions collapse onto one move pair
  CHECK(rw("VPMOVWB") == std::vector<std::string>{"VPMOVS16S8"});
  CHECK(rw("VPMOVSXBW") == std::vector<std::string>{"VPMOVS16S8"});
  CHECK(rw("VPMOVZXBW") == std::vector<std::string>{"VPMOVU16U8"});
  // float-to-float conversions are removed with a reason
  RewriteResult r = tables().rewrite("VCVTPS2PH");
  CHECK(r.proposed.empty());
  CHECK(r.drop_reason.find("no takum-to-takum counterpart") != std::string::npos);
}

TEST_CASE("enumerate_proposed pinned expansions") {
  const GroupDef& m03 = tables().group("M03");
  CHECK(m03.proposed_language ==
        std::vector<std::string>{"VPMOVB162M", "VPMOVB322M", "VPMOVB642M",
                                 "VPMOVB82M"});
  const GroupDef& c01 = tables().group("C01");
  CHECK(c01.proposed_language ==
        std::vector<std::string>{"VAESDEC", "VAESDECLAST", "VAESENC",
                                 "VAESENCLAST"});
  const GroupDef& f08 = tables().group("F08");
  CHECK(f08.proposed_language ==
        std::vector<std::string>{"VDPPT16PT32", "VDPPT32PT64", "VDPPT8PT16"});
  const GroupDef& m02 = tables().group("M02");
  CHECK(m02.proposed_language ==
        std::vector<std::string>{"VKUNPCKB16B32", "VKUNPCKB32B64",
                                 "VKUNPCKB8B16"});
}

TEST_CASE("closure: every rewrite image is in the proposed set") {
  auto proposed = tables().enumerate_proposed();
  std::set<std::string> pset(proposed.begin(), proposed.end());
  for (const std::string& m : tables().legacy_list())
    for (const std::string& p : tables().rewrite(m).proposed) {
      CHECK(pset.count(p) == 1);
    }
}

TEST_CASE("idempotence: proposed mnemonics rewrite to themselves") {
  for (const std::string& p : tables().enumerate_proposed()) {
    RewriteResult r = tables().rewrite(p);
    REQUIRE(r.proposed.size() == 1);
    CHECK(r.proposed[0] == p);
  }
}

TEST_CASE("no non-standard format names survive in the proposed set") {
  for (const std::string& p : tables().enumerate_proposed()) {
    CHECK(p.find("BF16") == std::string::npos);
    CHECK(p.find("HF8") == std::string::npos);
    CHECK(p.find("BF8") == std::string::npos);
    CHECK(p.find("PH") == std::string::npos);
    // "NE" marked exception-free bfloat16 ops; the only surviving "NE"
    // letters sit inside the AFFINE stem of the GF(2^8) instructions.
    std::string scrubbed = p;
    std::size_t at = scrubbed.find("AFFINE");
    if (at != std::string::npos) scrubbed.erase(at, 6);
    CHECK(scrubbed.find("NE") == std::string::npos);
  }
}

TEST_CASE("diff report separates renames, removals and additions") {
  auto diff = tables().diff();
  std::size_t removed = 0, added = 0, unchanged = 0;
  for (const DiffEntry& e : diff) {
    if (e.kind == "removed") {
      ++removed;
      CHECK(!e.detail.empty());
    } else if (e.kind == "added") {
      ++added;
    } else if (e.kind == "unchanged") {
      ++unchanged;
    }
  }
  CHECK(removed == 30);  // the float-to-float conversion block
  CHECK(added > 0);      // generalized widths with no legacy preimage
  CHECK(unchanged > 0);  // B12 and the AES group keep their names

  std::ostringstream csv, text;
  write_diff_csv(csv, diff);
  write_diff_text(text, diff);
  CHECK(csv.str().rfind("kind,mnemonic,detail\n", 0) == 0);
  CHECK(text.str().find("renamed") != std::string::npos);
}

TEST_CASE("table integrity errors") {
  // a list entry no pattern covers
  {
    std::ofstream bad("/tmp/takumlab_bad_list.txt");
    bad << "VNOTREAL\n";
  }
  CHECK_THROWS_AS(IsaTables::load(kGroups, "/tmp/takumlab_bad_list.txt"), DataError);

  // overlapping legacy patterns must be rejected
  {
    std::ofstream g("/tmp/takumlab_bad_groups.txt");
    g << "group X1\ncategory mask\nlegacy KADD(B|W)\nproposed KADDB(8|16)\n"
      << "rewrite KADDB -> KADDB8\nend\n"
      << "group X2\ncategory mask\nlegacy KADDB\nproposed KADDB8\n"
      << "rewrite KADDB -> KADDB8\nend\n";
    std::ofstream l("/tmp/takumlab_bad_overlap_list.txt");
    l << "KADDB\n";
  }
  CHECK_THROWS_AS(IsaTables::load("/tmp/takumlab_bad_groups.txt",
                                  "/tmp/takumlab_bad_overlap_list.txt"),
                  DataError);
}
