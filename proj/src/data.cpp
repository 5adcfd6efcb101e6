#include "nsx/data.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "nsx/errors.hpp"
#include "nsx/rng.hpp"

namespace nsx {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

Dataset make_dataset(std::string name, RowMatrix rows, Metric metric) {
  if (rows.rows() == 0 || rows.cols() == 0) throw InvalidArgument("dataset " + name + " is empty");
  if (metric.requires_probability_input()) rows = l1_normalize(rows);
  for (Index i = 0; i < rows.rows(); ++i) metric.check_domain(row_span(rows, i));
  return {std::move(name), std::move(rows), std::move(metric)};
}

RowMatrix gen_uniform(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidArgument("gen_uniform: sizes must be positive");
  Rng rng(seed);
  RowMatrix out(n, m);
  for (Index i = 0; i < out.size(); ++i) out.data()[i] = rng.uniform();
  return out;
}

RowMatrix gen_gaussian(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidArgument("gen_gaussian: sizes must be positive");
  Rng rng(seed);
  RowMatrix out(n, m);
  for (Index i = 0; i < out.size(); ++i) out.data()[i] = rng.normal();
  return out;
}

RowMatrix l1_normalize(const RowMatrix& rows) {
  RowMatrix out = rows;
  for (Index i = 0; i < out.rows(); ++i) {
    if ((out.row(i).array() < 0.0).any()) {
      throw DomainError("l1_normalize: row " + std::to_string(i) + " has a negative component");
    }
    const double s = out.row(i).sum();
    if (!(s > 0.0)) throw DomainError("l1_normalize: row " + std::to_string(i) + " is zero");
    out.row(i) /= s;
  }
  return out;
}

RowMatrix l2_normalize(const RowMatrix& rows) {
  RowMatrix out = rows;
  for (Index i = 0; i < out.rows(); ++i) {
    const double s = out.row(i).norm();
    if (!(s > 0.0)) throw DomainError("l2_normalize: row " + std::to_string(i) + " is zero");
    out.row(i) /= s;
  }
  return out;
}

namespace {

std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, mode);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

// Walks the (int32 dim, payload) framing shared by fvecs and ivecs.
template <class T, class Sink>
void read_vecs(const std::filesystem::path& path, Sink sink) {
  const auto bytes = read_all(path);
  std::size_t pos = 0;
  std::int64_t expected = -1;
  std::size_t record = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      throw FormatError(path.string() + ": truncated header at record " + std::to_string(record));
    }
    std::int32_t dim;
    std::memcpy(&dim, bytes.data() + pos, 4);
    pos += 4;
    if (dim <= 0) {
      throw FormatError(path.string() + ": record " + std::to_string(record) + " has dimension " +
                        std::to_string(dim));
    }
    if (expected >= 0 && dim != expected) {
      throw FormatError(path.string() + ": record " + std::to_string(record) + " has dimension " +
                        std::to_string(dim) + ", expected " + std::to_string(expected));
    }
    expected = dim;
    const std::size_t payload = static_cast<std::size_t>(dim) * sizeof(T);
    if (bytes.size() - pos < payload) {
      throw FormatError(path.string() + ": truncated payload at record " + std::to_string(record));
    }
    std::vector<T> values(static_cast<std::size_t>(dim));
    std::memcpy(values.data(), bytes.data() + pos, payload);
    pos += payload;
    sink(values);
    ++record;
  }
}

template <class T>
void write_record(std::ofstream& out, const T* values, std::size_t dim) {
  const auto d = static_cast<std::int32_t>(dim);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(values), static_cast<std::streamsize>(dim * sizeof(T)));
}

bool parse_line(std::string_view line, std::vector<double>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t end = std::min(line.find(',', start), line.size());
    std::string_view cell = line.substr(start, end - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
      cell.remove_suffix(1);
    }
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) return false;
    out.push_back(v);
    if (end == line.size()) return true;
    start = end + 1;
  }
}

}  // namespace

RowMatrix load_fvecs(const std::filesystem::path& path) {
  std::vector<float> flat;
  std::size_t dim = 0;
  read_vecs<float>(path, [&](const std::vector<float>& rec) {
    dim = rec.size();
    flat.insert(flat.end(), rec.begin(), rec.end());
  });
  if (dim == 0) throw FormatError(path.string() + ": no records");
  const auto n = static_cast<Index>(flat.size() / dim);
  RowMatrix out(n, static_cast<Index>(dim));
  for (std::size_t i = 0; i < flat.size(); ++i) out.data()[i] = flat[i];
  return out;
}

void write_fvecs(const std::filesystem::path& path, const RowMatrix& rows) {
  auto out = open_out(path, std::ios::binary);
  std::vector<float> rec(static_cast<std::size_t>(rows.cols()));
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < rows.cols(); ++j) rec[j] = static_cast<float>(rows(i, j));
    write_record(out, rec.data(), rec.size());
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

std::vector<std::vector<ObjectId>> load_ivecs(const std::filesystem::path& path) {
  std::vector<std::vector<ObjectId>> lists;
  read_vecs<std::int32_t>(path, [&](const std::vector<std::int32_t>& rec) {
    std::vector<ObjectId> ids(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec[i] < 0) throw FormatError(path.string() + ": negative id");
      ids[i] = static_cast<ObjectId>(rec[i]);
    }
    lists.push_back(std::move(ids));
  });
  return lists;
}

void write_ivecs(const std::filesystem::path& path, const std::vector<std::vector<ObjectId>>& lists) {
  auto out = open_out(path, std::ios::binary);
  for (const auto& ids : lists) {
    std::vector<std::int32_t> rec(ids.begin(), ids.end());
    write_record(out, rec.data(), rec.size());
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

RowMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<double> flat, cells;
  std::size_t dim = 0, lineno = 0, records = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    if (!parse_line(line, cells)) {
      if (records == 0 && lineno == 1) continue;  // header
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": non-numeric cell");
    }
    if (records == 0) dim = cells.size();
    if (cells.size() != dim) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(dim) + " values, found " + std::to_string(cells.size()));
    }
    flat.insert(flat.end(), cells.begin(), cells.end());
    ++records;
  }
  if (records == 0) throw FormatError(path.string() + ": no records");
  return Eigen::Map<RowMatrix>(flat.data(), static_cast<Index>(records), static_cast<Index>(dim));
}

void write_csv(const std::filesystem::path& path, const RowMatrix& rows) {
  auto out = open_out(path);
  char buf[32];
  std::string line;
  for (Index i = 0; i < rows.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < rows.cols(); ++j) {
      if (j) line += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, rows(i, j));
      line.append(buf, res.ptr);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

RowMatrix load_rows(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".fvecs") return load_fvecs(path);
  if (ext == ".csv") return load_csv(path);
  throw FormatError(path.string() + ": unknown extension (expected .fvecs or .csv)");
}

void write_rows(const std::filesystem::path& path, const RowMatrix& rows) {
  const auto ext = path.extension();
  if (ext == ".fvecs") return write_fvecs(path, rows);
  if (ext == ".csv") return write_csv(path, rows);
  throw FormatError(path.string() + ": unknown extension (expected .fvecs or .csv)");
}

WitnessSplit sample_witness(Index n, Index witness_size, Index eval_size, std::uint64_t seed) {
  if (witness_size < 0 || eval_size < 0 || witness_size + eval_size > n) {
    throw InvalidArgument("sample_witness: " + std::to_string(witness_size) + " + " +
                          std::to_string(eval_size) + " exceeds " + std::to_string(n) + " objects");
  }
  Rng rng(seed);
  const auto drawn = rng.sample(static_cast<std::size_t>(n),
                                static_cast<std::size_t>(witness_size + eval_size));
  WitnessSplit split;
  split.seed = seed;
  split.witness.assign(drawn.begin(), drawn.begin() + witness_size);
  split.evaluation.assign(drawn.begin() + witness_size, drawn.end());
  return split;
}

RowMatrix select_rows(const RowMatrix& data, const std::vector<Index>& indices) {
  RowMatrix out(static_cast<Index>(indices.size()), data.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= data.rows()) throw InvalidArgument("select_rows: index out of range");
    out.row(static_cast<Index>(i)) = data.row(indices[i]);
  }
  return out;
}

std::vector<std::pair<Index, Index>> all_pairs(Index n) {
  std::vector<std::pair<Index, Index>> out;
  if (n < 2) return out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::vector<std::pair<Index, Index>> sample_pairs(Index n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sample_pairs: need at least two objects");
  const auto total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  if (count >= total) return all_pairs(n);
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  std::vector<std::pair<Index, Index>> out;
  out.reserve(count);
  const auto un = static_cast<std::uint64_t>(n);
  while (out.size() < count) {
    auto i = rng.below(un), j = rng.below(un);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (!seen.insert(i * un + j).second) continue;
    out.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
  }
  return out;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

NeighbourLists knn_lists(std::size_t query_count, Index n, std::size_t k,
                         const std::function<double(std::size_t, Index)>& distance,
                         const std::function<Index(std::size_t)>& exclude, unsigned workers) {
  if (k == 0 || static_cast<Index>(k) >= n) {
    throw InvalidArgument("knn: K must satisfy 0 < K < n (K=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
  }
  NeighbourLists out(query_count);
  parallel_for(query_count, workers, [&](std::size_t q) {
    std::vector<std::pair<double, ObjectId>> cand;
    cand.reserve(static_cast<std::size_t>(n));
    const Index skip = exclude(q);
    for (Index j = 0; j < n; ++j) {
      if (j != skip) cand.emplace_back(distance(q, j), static_cast<ObjectId>(j));
    }
    const std::size_t take = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());
    auto& ids = out[q];
    ids.resize(take);
    for (std::size_t i = 0; i < take; ++i) ids[i] = cand[i].second;
  });
  return out;
}

NeighbourLists knn_ground_truth(const Dataset& corpus, const std::vector<Index>& query_indices,
                                std::size_t k, unsigned workers) {
  const RowMatrix& rows = corpus.rows;
  const Metric& metric = corpus.metric;
  return knn_lists(
      query_indices.size(), rows.rows(), k,
      [&](std::size_t q, Index j) { return metric(row_span(rows, query_indices[q]), row_span(rows, j)); },
      [&](std::size_t q) { return query_indices[q]; }, workers);
}

}  // namespace nsx
