#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsx/config.hpp"
#include "nsx/csv_out.hpp"
#include "nsx/data.hpp"
#include "nsx/persist.hpp"
#include "nsx/quality.hpp"

namespace nsx {

/// How distances are measured between reduced points.
enum class Estimator { Euclidean, Lwb, Zen, Upb };

struct FittedReducer {
  std::string method;
  Index k = 0;
  StoredTransform transform;
  Estimator estimator = Estimator::Euclidean;

  RowMatrix apply(const RowMatrix& rows) const { return apply_transform(transform, rows); }
  /// One object through the single-object code path of each method.
  Vector apply_one(ConstSpan row) const;
  double distance(ConstSpan a, ConstSpan b) const;
};

/// Stable 64-bit tag of a string (FNV-1a), for seed derivation.
std::uint64_t name_tag(std::string_view name);

/// Seed of a method's random choices at dimension k. zen, lwb and upb share
/// one stream so that the three estimators use the same references.
std::uint64_t method_seed(std::uint64_t seed, const std::string& method, Index k);

/// Fits any method on one witness set. Decompositions of the witness set
/// shared between target dimensions are computed once at construction;
/// fit() is then safe to call concurrently.
class FitContext {
 public:
  FitContext(RowMatrix witness, Metric metric, std::uint64_t seed, const std::vector<std::string>& methods,
             Index lmds_landmarks = 0);
  ~FitContext();
  FitContext(FitContext&&) noexcept;

  /// Throws InvalidArgument for an unknown method or one that cannot work
  /// with this metric (linear methods need explicit coordinates).
  FittedReducer fit(const std::string& method, Index k) const;

  const RowMatrix& witness() const { return witness_; }
  const Metric& metric() const { return metric_; }

 private:
  struct Shared;
  RowMatrix witness_;
  Metric metric_;
  std::uint64_t seed_;
  Index lmds_landmarks_;
  std::unique_ptr<Shared> shared_;
};

/// Generated or loaded dataset named by the config, with at least `needed`
/// objects.
Dataset experiment_dataset(const ExperimentConfig& config, Index needed);

/// Pairs drawn from the rows of `rows` together with their true distances.
struct EvalPairs {
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<double> delta;
};

EvalPairs make_eval_pairs(const RowMatrix& rows, const Metric& metric, std::vector<std::pair<Index, Index>> pairs);
DistancePairSample reduced_sample(const EvalPairs& pairs, const RowMatrix& reduced, const FittedReducer& r);

/// Neighbour lists in the reduced space, same conventions as knn_ground_truth.
NeighbourLists reduced_knn(const RowMatrix& reduced, const FittedReducer& r,
                           const std::vector<Index>& query_indices, std::size_t k, unsigned workers);

/// Mean dcg_recall over matching lists.
double mean_recall(const NeighbourLists& truth, const NeighbourLists& reduced);

struct ProfileCell {
  std::string method;
  Index k = 0;
  std::optional<QualityReport> report;
  double quadloss_norm = 0.0;
  std::string error;
};

struct ProfileResult {
  std::vector<ProfileCell> cells;
  Provenance provenance;
  bool complete() const;
};

ProfileResult run_profile(const ExperimentConfig& config, std::ostream& log);
void write_profile(const ProfileResult& result, const std::filesystem::path& path);

struct ShepardSeries {
  std::string method;
  Index k = 0;
  std::vector<double> zeta;   // scatter, all pairs of the plot objects
  std::vector<double> delta;
  std::vector<double> fit;    // isotonic fit of delta on zeta, per scatter point
  std::optional<double> stress;  // Kruskal stress on the large pair sample
  std::string error;
};

struct ShepardResult {
  std::vector<ShepardSeries> series;
  Provenance provenance;
  bool complete() const;
};

/// Every requested method at the largest requested dimension.
ShepardResult run_shepard(const ExperimentConfig& config, std::ostream& log);
void write_shepard(const ShepardResult& result, const std::filesystem::path& dir);

struct RecallCell {
  std::string method;
  Index k = 0;
  std::optional<double> recall;
  std::string error;
};

struct RecallResult {
  std::vector<RecallCell> cells;
  Provenance provenance;
  bool ground_truth_from_cache = false;
  bool complete() const;
};

RecallResult run_recall(const ExperimentConfig& config, std::ostream& log);
void write_recall(const RecallResult& result, const std::filesystem::path& path);

struct AngleRow {
  Index dim = 0;
  AngleStats stats;
  std::vector<std::size_t> histogram;  // `bins` equal bins over [0, pi]
};

struct AngleResult {
  std::vector<AngleRow> rows;
  Provenance provenance;
};

AngleResult run_angles(const ExperimentConfig& config, std::ostream& log);
void write_angles(const AngleResult& result, const std::filesystem::path& dir);

struct BenchCell {
  std::string method;
  Index k = 0;
  std::optional<double> fit_seconds;          // median over repetitions
  std::optional<double> looped_per_object;    // seconds, one call per object
  std::optional<double> batch_per_object;     // seconds, one call for all objects
  std::string error;
};

struct BenchResult {
  std::vector<BenchCell> cells;
  Provenance provenance;
  bool complete() const;
};

BenchResult run_bench(const ExperimentConfig& config, std::ostream& log);
void write_bench(const BenchResult& result, const std::filesystem::path& path);

/// Each command writes its files under config.out and returns the process
/// exit status (0 iff every requested cell was produced).
int cmd_profile(const ExperimentConfig& config, std::ostream& log);
int cmd_shepard(const ExperimentConfig& config, std::ostream& log);
int cmd_recall(const ExperimentConfig& config, std::ostream& log);
int cmd_angles(const ExperimentConfig& config, std::ostream& log);
int cmd_bench(const ExperimentConfig& config, std::ostream& log);

}  // namespace nsx
