#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "takumlab/matrix_market.hpp"

namespace takumlab {

/// One row of the collection index CSV (id,group,name,nnz,kind[,url]).
struct IndexRecord {
  std::string id;     // "group/name"
  std::string group;
  std::string name;
  long nnz = 0;
  std::string kind;   // real | integer | complex | pattern | binary
  std::string url;    // empty: derive from the default archive template
};

struct CollectionIndex {
  std::vector<IndexRecord> records;  // unique ids, input order
};

CollectionIndex load_collection_index(std::istream& in);
CollectionIndex load_collection_index_file(const std::string& path);

struct FetchOptions {
  long max_nnz = 50000;
  std::string cache_dir;      // empty: $TAKUMLAB_CACHE or ./cache
  bool offline = false;       // never touch the network
  bool refresh = false;       // re-download even when cached
  int jobs = 1;               // bounded download parallelism
  std::string url_template =  // {group}/{name} substituted
      "https://sparse.tamu.edu/MM/{group}/{name}.tar.gz";
};

/// Environment override for the cache root.
inline constexpr const char* kCacheEnvVar = "TAKUMLAB_CACHE";

std::string default_cache_dir();

/// Cache location of a matrix: <cache>/<group>/<name>/<name>.mtx
std::string cached_matrix_path(const std::string& cache_dir,
                               const IndexRecord& rec);

struct ManifestEntry {
  std::string id;
  long nnz = 0;
  bool included = false;
  std::string reason;  // exclusion reason, empty when included
};

struct CollectionResult {
  std::vector<SparseMatrix> matrices;      // lexicographic by id
  std::vector<ManifestEntry> manifest;     // lexicographic by id
};

/// Selects every real/integer record with nnz <= max_nnz, downloads and
/// caches missing archives (unless offline), parses the Matrix Market
/// payloads and reports every index row in the manifest with its
/// inclusion state. Network failures raise NetworkError naming the
/// matrix; a cache miss in offline mode excludes the row with a
/// "missing from cache" reason.
CollectionResult fetch_collection(const CollectionIndex& index,
                                  const FetchOptions& options);

/// Manifest CSV: id,nnz,included,reason
void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& manifest);

/// Downloads url into memory. Throws NetworkError.
std::vector<std::byte> http_get(const std::string& url);

/// gzip (or zlib) decompression of a whole buffer. Throws DataError.
std::vector<std::byte> gunzip(const std::vector<std::byte>& compressed);

/// Extracts the first regular file whose name ends in `suffix` from a
/// ustar archive. Throws DataError when absent or malformed.
std::string tar_extract_by_suffix(const std::vector<std::byte>& tar,
                                  const std::string& suffix);

}  // namespace takumlab
