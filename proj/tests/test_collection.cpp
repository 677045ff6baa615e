#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <zlib.h>

#include <cstring>
#include <sstream>

#include "takumlab/collection.hpp"
#include "takumlab/errors.hpp"

using namespace takumlab;

namespace {
const std::string kIndexPath = std::string(TAKUMLAB_DATA_DIR) + "/collection_index.csv";
const std::string kCachePath = std::string(TAKUMLAB_DATA_DIR) + "/matrices";
}  // namespace

TEST_CASE("index parses and keeps ids unique") {
  CollectionIndex idx = load_collection_index_file(kIndexPath);
  CHECK(idx.records.size() == 25);
  CHECK_THROWS_AS(
      [] {
        std::istringstream in("id,group,name,nnz,kind\n"
                              "a/b,a,b,3,real\n"
                              "a/b,a,b,4,real\n");
        load_collection_index(in);
      }(),
      DataError);
  CHECK_THROWS_AS(
      [] {
        std::istringstream in("id,group,nnz,kind\na/b,a,3,real\n");
        load_collection_index(in);
      }(),
      DataError);
}

TEST_CASE("offline fetch over the bundled cache") {
  CollectionIndex idx = load_collection_index_file(kIndexPath);
  FetchOptions opt;
  opt.cache_dir = kCachePath;
  opt.offline = true;

  CollectionResult r = fetch_collection(idx, opt);
  CHECK(r.matrices.size() == 20);
  CHECK(r.manifest.size() == 25);

  // manifest is lexicographic by id
  for (std::size_t i = 1; i < r.manifest.size(); ++i)
    CHECK(r.manifest[i - 1].id < r.manifest[i].id);
  for (std::size_t i = 1; i < r.matrices.size(); ++i)
    CHECK(r.matrices[i - 1].id < r.matrices[i].id);

  // exclusion reasons
  auto find = [&](const std::string& id) -> const ManifestEntry& {
    for (const ManifestEntry& e : r.manifest)
      if (e.id == id) return e;
    FAIL("missing manifest entry " << id);
    static ManifestEntry dummy;
    return dummy;
  };
  CHECK(!find("demo/complex_wave").included);
  CHECK(find("demo/complex_wave").reason.find("complex") != std::string::npos);
  CHECK(!find("demo/pattern_graph").included);
  CHECK(!find("grids/binary_blob").included);
  CHECK(!find("grids/big_fem").included);
  CHECK(find("grids/big_fem").reason.find("nnz") != std::string::npos);
  CHECK(!find("demo/not_cached").included);
  CHECK(find("demo/not_cached").reason.find("missing from cache") != std::string::npos);
  CHECK(find("demo/unit_diag").included);
}

TEST_CASE("nnz filter and determinism") {
  CollectionIndex idx = load_collection_index_file(kIndexPath);
  FetchOptions opt;
  opt.cache_dir = kCachePath;
  opt.offline = true;

  SUBCASE("max_nnz zero admits nothing") {
    opt.max_nnz = 0;
    CollectionResult r = fetch_collection(idx, opt);
    CHECK(r.matrices.empty());
    CHECK(r.manifest.size() == 25);
  }

  SUBCASE("repeated runs produce byte-identical manifests") {
    opt.jobs = 1;
    CollectionResult a = fetch_collection(idx, opt);
    opt.jobs = 4;
    CollectionResult b = fetch_collection(idx, opt);
    std::ostringstream ma, mb;
    write_manifest_csv(ma, a.manifest);
    write_manifest_csv(mb, b.manifest);
    CHECK(ma.str() == mb.str());
    REQUIRE(a.matrices.size() == b.matrices.size());
    for (std::size_t i = 0; i < a.matrices.size(); ++i) {
      CHECK(a.matrices[i].id == b.matrices[i].id);
      CHECK(a.matrices[i].nnz() == b.matrices[i].nnz());
    }
  }
}

TEST_CASE("network failures propagate naming the matrix") {
  // a record that is neither filtered nor cached, with an unusable url:
  // fetch must raise NetworkError rather than exclude silently
  CollectionIndex idx;
  idx.records.push_back({"demo/netfail", "demo", "netfail", 3, "real", "bogus-url"});
  FetchOptions opt;
  opt.cache_dir = "/tmp/takumlab_no_cache";
  opt.offline = false;
  try {
    fetch_collection(idx, opt);
    FAIL("expected NetworkError");
  } catch (const NetworkError& e) {
    CHECK(std::string(e.what()).find("demo/netfail") != std::string::npos);
  }
}

TEST_CASE("gzip round trip") {
  // gzip of "hello matrix\n" produced by zlib itself
  std::string text = "hello matrix\n";
  std::vector<std::byte> raw(text.size());
  std::memcpy(raw.data(), text.data(), text.size());

  // compress with zlib's gzip wrapper through compress2-style API
  // (kept local: the library only exposes decompression)
  z_stream strm{};
  deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
               Z_DEFAULT_STRATEGY);
  std::vector<unsigned char> out(256);
  strm.next_in = reinterpret_cast<Bytef*>(raw.data());
  strm.avail_in = static_cast<uInt>(raw.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  REQUIRE(deflate(&strm, Z_FINISH) == Z_STREAM_END);
  std::vector<std::byte> gz(reinterpret_cast<std::byte*>(out.data()),
                            reinterpret_cast<std::byte*>(out.data()) +
                                (out.size() - strm.avail_out));
  deflateEnd(&strm);

  std::vector<std::byte> back = gunzip(gz);
  CHECK(std::string(reinterpret_cast<const char*>(back.data()), back.size()) == text);

  gz.pop_back();
  CHECK_THROWS_AS(gunzip(gz), DataError);
}

TEST_CASE("tar member extraction") {
  // minimal ustar archive with one member "g/m/m.mtx"
  std::string name = "g/m/m.mtx";
  std::string payload = "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.5\n";
  std::vector<std::byte> tar(512 * 3, std::byte{0});
  auto put = [&](std::size_t off, const std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) tar[off + i] = std::byte(s[i]);
  };
  put(0, name);
  char size_field[13];
  std::snprintf(size_field, sizeof size_field, "%011o", unsigned(payload.size()));
  put(124, size_field);
  tar[156] = std::byte('0');
  put(257, "ustar");
  put(512, payload);

  CHECK(tar_extract_by_suffix(tar, "/m.mtx") == payload);
  CHECK_THROWS_AS(tar_extract_by_suffix(tar, "/other.mtx"), DataError);
}
