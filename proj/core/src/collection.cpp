#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "takumlab/collection.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "takumlab/errors.hpp"

namespace fs = std::filesystem;

namespace takumlab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

CollectionIndex load_collection_index(std::istream& in) {
  CollectionIndex idx;
  std::string line;
  if (!std::getline(in, line)) throw DataError("collection index: empty file");
  auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"id", "group", "name", "nnz", "kind"})
    if (!col.count(required))
      throw DataError(std::string("collection index: missing column '") +
                      required + "'");

  std::size_t lineno = 1;
  std::map<std::string, bool> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_csv_line(line);
    if (f.size() < header.size()) {
      std::ostringstream os;
      os << "collection index line " << lineno << ": expected "
         << header.size() << " fields";
      throw DataError(os.str());
    }
    IndexRecord rec;
    rec.id = f[col["id"]];
    rec.group = f[col["group"]];
    rec.name = f[col["name"]];
    rec.kind = f[col["kind"]];
    const std::string& nnz_tok = f[col["nnz"]];
    auto [p, ec] = std::from_chars(nnz_tok.data(), nnz_tok.data() + nnz_tok.size(),
                                   rec.nnz);
    if (ec != std::errc() || p != nnz_tok.data() + nnz_tok.size()) {
      std::ostringstream os;
      os << "collection index line " << lineno << ": bad nnz '" << nnz_tok << "'";
      throw DataError(os.str());
    }
    if (col.count("url")) rec.url = f[col["url"]];
    if (rec.id.empty()) rec.id = rec.group + "/" + rec.name;
    if (seen[rec.id]) throw DataError("collection index: duplicate id " + rec.id);
    seen[rec.id] = true;
    idx.records.push_back(std::move(rec));
  }
  return idx;
}

CollectionIndex load_collection_index_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open collection index: " + path);
  return load_collection_index(in);
}

std::string default_cache_dir() {
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  return "cache";
}

std::string cached_matrix_path(const std::string& cache_dir, const IndexRecord& rec) {
  return (fs::path(cache_dir) / rec.group / rec.name / (rec.name + ".mtx")).string();
}

std::vector<std::byte> http_get(const std::string& url) {
  // scheme://host[:port]/path
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw NetworkError("bad url: " + url);
  std::string scheme = url.substr(0, scheme_end);
  auto path_start = url.find('/', scheme_end + 3);
  std::string host = url.substr(scheme_end + 3,
                                path_start == std::string::npos
                                    ? std::string::npos
                                    : path_start - scheme_end - 3);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  std::string origin = scheme + "://" + host;
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  auto res = client.Get(path);
  if (!res)
    throw NetworkError("download failed for " + url + ": " +
                       httplib::to_string(res.error()));
  if (res->status != 200) {
    std::ostringstream os;
    os << "download failed for " << url << ": http status " << res->status;
    throw NetworkError(os.str());
  }
  const std::string& body = res->body;
  std::vector<std::byte> out(body.size());
  std::memcpy(out.data(), body.data(), body.size());
  return out;
}

std::vector<std::byte> gunzip(const std::vector<std::byte>& compressed) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 32) != Z_OK)
    throw DataError("gunzip: cannot initialize zlib");
  std::vector<std::byte> out;
  std::vector<unsigned char> buf(1 << 16);
  strm.next_in = reinterpret_cast<Bytef*>(
      const_cast<std::byte*>(compressed.data()));
  strm.avail_in = static_cast<uInt>(compressed.size());
  int rc = Z_OK;
  do {
    strm.next_out = buf.data();
    strm.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw DataError("gunzip: corrupt stream");
    }
    std::size_t produced = buf.size() - strm.avail_out;
    const std::byte* p = reinterpret_cast<const std::byte*>(buf.data());
    out.insert(out.end(), p, p + produced);
  } while (rc != Z_STREAM_END && (strm.avail_in > 0 || strm.avail_out == 0));
  inflateEnd(&strm);
  if (rc != Z_STREAM_END) throw DataError("gunzip: truncated stream");
  return out;
}

std::string tar_extract_by_suffix(const std::vector<std::byte>& tar,
                                  const std::string& suffix) {
  const std::size_t n = tar.size();
  std::size_t off = 0;
  auto read_octal = [&](std::size_t pos, std::size_t len) -> std::size_t {
    std::size_t v = 0;
    for (std::size_t i = 0; i < len && pos + i < n; ++i) {
      char c = static_cast<char>(tar[pos + i]);
      if (c == '\0' || c == ' ') break;
      if (c < '0' || c > '7') throw DataError("tar: bad size field");
      v = v * 8 + static_cast<std::size_t>(c - '0');
    }
    return v;
  };
  while (off + 512 <= n) {
    bool all_zero = true;
    for (std::size_t i = 0; i < 512 && all_zero; ++i)
      all_zero = tar[off + i] == std::byte{0};
    if (all_zero) break;

    std::string name;
    for (std::size_t i = 0; i < 100; ++i) {
      char c = static_cast<char>(tar[off + i]);
      if (c == '\0') break;
      name += c;
    }
    std::string prefix;
    for (std::size_t i = 0; i < 155 && off + 345 + i < n; ++i) {
      char c = static_cast<char>(tar[off + 345 + i]);
      if (c == '\0') break;
      prefix += c;
    }
    if (!prefix.empty()) name = prefix + "/" + name;
    std::size_t size = read_octal(off + 124, 12);
    char type = static_cast<char>(tar[off + 156]);

    std::size_t data = off + 512;
    if ((type == '0' || type == '\0') && name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      if (data + size > n) throw DataError("tar: truncated archive");
      return std::string(reinterpret_cast<const char*>(tar.data() + data), size);
    }
    off = data + ((size + 511) / 512) * 512;
  }
  throw DataError("tar: no member matching *" + suffix);
}

namespace {

// Corrupt archives must surface as integrity failures, not as manifest
// exclusions.
struct ArchiveIntegrityError : DataError {
  using DataError::DataError;
};

// Downloads, unpacks and caches one matrix; returns the cached path.
std::string materialize(const IndexRecord& rec, const FetchOptions& opt,
                        const std::string& cache_dir) {
  std::string path = cached_matrix_path(cache_dir, rec);
  if (!opt.refresh && fs::exists(path)) return path;
  if (opt.offline) throw DataError("missing from cache: " + rec.id);

  std::string url = rec.url;
  if (url.empty())
    url = replace_all(replace_all(opt.url_template, "{group}", rec.group),
                      "{name}", rec.name);
  std::vector<std::byte> archive = http_get(url);
  std::vector<std::byte> tar;
  std::string mtx;
  try {
    tar = gunzip(archive);
    mtx = tar_extract_by_suffix(tar, "/" + rec.name + ".mtx");
  } catch (const DataError& e) {
    throw ArchiveIntegrityError("archive integrity for " + rec.id + ": " + e.what());
  }

  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(mtx.data(), static_cast<std::streamsize>(mtx.size()));
  if (!out) throw DataError("cannot write cache file: " + path);

  // Record the archive byte count; a later size mismatch on refresh
  // flags a changed snapshot.
  std::ofstream meta(path + ".meta");
  meta << "archive_bytes " << archive.size() << "\n";
  return path;
}

}  // namespace

CollectionResult fetch_collection(const CollectionIndex& index,
                                  const FetchOptions& options) {
  std::string cache_dir =
      options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;

  struct Slot {
    const IndexRecord* rec = nullptr;
    std::optional<SparseMatrix> matrix;
    std::string reason;
  };
  std::vector<Slot> slots(index.records.size());
  for (std::size_t i = 0; i < slots.size(); ++i)
    slots[i].rec = &index.records[i];

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto fail_with = [&](std::exception_ptr e) {
    std::lock_guard<std::mutex> lock(error_mutex);
    if (!first_error) first_error = std::move(e);
  };
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= slots.size()) return;
      Slot& slot = slots[i];
      const IndexRecord& rec = *slot.rec;
      try {
        if (rec.kind != "real" && rec.kind != "integer") {
          slot.reason = "unsupported field kind '" + rec.kind + "'";
          continue;
        }
        if (rec.nnz > options.max_nnz) {
          slot.reason = "nnz above limit";
          continue;
        }
        std::string path = materialize(rec, options, cache_dir);
        slot.matrix = parse_matrix_market_file(path, rec.id);
      } catch (const NetworkError& e) {
        // retryable; abort the run naming the matrix
        fail_with(std::make_exception_ptr(
            NetworkError(rec.id + ": " + e.what())));
      } catch (const ArchiveIntegrityError&) {
        fail_with(std::current_exception());
      } catch (const DataError& e) {
        slot.reason = e.what();
      } catch (...) {
        fail_with(std::current_exception());
      }
    }
  };
  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || slots.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(slots.size()));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return slots[a].rec->id < slots[b].rec->id;
  });

  CollectionResult result;
  for (std::size_t i : order) {
    Slot& slot = slots[i];
    ManifestEntry entry;
    entry.id = slot.rec->id;
    entry.nnz = slot.rec->nnz;
    entry.included = slot.matrix.has_value();
    entry.reason = slot.reason;
    result.manifest.push_back(std::move(entry));
    if (slot.matrix) result.matrices.push_back(std::move(*slot.matrix));
  }
  return result;
}

void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& manifest) {
  os << "id,nnz,included,reason\n";
  for (const ManifestEntry& e : manifest) {
    std::string reason = e.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    os << e.id << ',' << e.nnz << ',' << (e.included ? "yes" : "no") << ','
       << reason << '\n';
  }
}

}  // namespace takumlab
