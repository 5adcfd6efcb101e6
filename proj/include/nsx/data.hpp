#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nsx/metrics.hpp"
#include "nsx/types.hpp"

namespace nsx {

struct Dataset {
  std::string name;
  RowMatrix rows;
  Metric metric = Metric::euclidean();

  Index size() const { return rows.rows(); }
  Index dim() const { return rows.cols(); }
};

/// Wraps rows with a metric, normalising where the metric requires it
/// (l1 for probability metrics) and checking every row's domain.
Dataset make_dataset(std::string name, RowMatrix rows, Metric metric);

/// i.i.d. uniform [0,1) entries, row-major draw order.
RowMatrix gen_uniform(Index n, Index m, std::uint64_t seed);
/// i.i.d. standard normal entries.
RowMatrix gen_gaussian(Index n, Index m, std::uint64_t seed);

/// Rows divided by their sum. Throws DomainError on a negative entry or a
/// zero row.
RowMatrix l1_normalize(const RowMatrix& rows);
/// Rows divided by their Euclidean norm. Throws DomainError on a zero row.
RowMatrix l2_normalize(const RowMatrix& rows);

// fvecs: per record a little-endian int32 dimension followed by that many
// little-endian float32 values. Values are widened to double on load, so a
// load/write cycle reproduces the file byte for byte.
RowMatrix load_fvecs(const std::filesystem::path& path);
void write_fvecs(const std::filesystem::path& path, const RowMatrix& rows);

// ivecs: same framing with int32 payloads; used for neighbour lists.
std::vector<std::vector<ObjectId>> load_ivecs(const std::filesystem::path& path);
void write_ivecs(const std::filesystem::path& path, const std::vector<std::vector<ObjectId>>& lists);

/// Comma-separated numbers, one object per line. A first line that does not
/// parse as numbers is taken as a header and skipped. Parsing is
/// locale-independent.
RowMatrix load_csv(const std::filesystem::path& path);
/// Shortest round-trip decimal representation of every value.
void write_csv(const std::filesystem::path& path, const RowMatrix& rows);

/// Dispatches on extension (.fvecs or .csv).
RowMatrix load_rows(const std::filesystem::path& path);
void write_rows(const std::filesystem::path& path, const RowMatrix& rows);

struct WitnessSplit {
  std::vector<Index> witness;
  std::vector<Index> evaluation;
  std::uint64_t seed = 0;
};

/// Disjoint uniform samples without replacement from [0, n).
WitnessSplit sample_witness(Index n, Index witness_size, Index eval_size, std::uint64_t seed);

/// Rows of `data` at `indices`, in that order.
RowMatrix select_rows(const RowMatrix& data, const std::vector<Index>& indices);

/// `count` distinct unordered pairs (i < j) of [0, n), or all of them when
/// count >= n(n-1)/2 (then in lexicographic order).
std::vector<std::pair<Index, Index>> sample_pairs(Index n, std::size_t count, std::uint64_t seed);
std::vector<std::pair<Index, Index>> all_pairs(Index n);

/// Runs task(i) for i in [0, count) on `workers` threads (i strided over
/// threads). The first exception is rethrown after all threads finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

using NeighbourLists = std::vector<std::vector<ObjectId>>;

/// Generic exact kNN: for query q (0 <= q < query_count) the k ids j in
/// [0, n) with smallest distance(q, j), sorted by (distance, id).
/// exclude(q) names an id to leave out (or n for none). Work is split over
/// `workers` threads; the output does not depend on the split.
NeighbourLists knn_lists(std::size_t query_count, Index n, std::size_t k,
                         const std::function<double(std::size_t, Index)>& distance,
                         const std::function<Index(std::size_t)>& exclude, unsigned workers = 1);

/// The K nearest corpus rows to each query row (queries are corpus members
/// and excluded from their own lists).
NeighbourLists knn_ground_truth(const Dataset& corpus, const std::vector<Index>& query_indices,
                                std::size_t k, unsigned workers = 1);

}  // namespace nsx
