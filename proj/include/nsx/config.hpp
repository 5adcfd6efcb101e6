#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nsx/types.hpp"

namespace nsx {

/// Everything an experiment needs. Defaults follow the usual desk-scale
/// protocol: 1000 witness objects, 10^4 evaluation objects, 50 objects for
/// Shepard scatter plots, 100 queries with 1000 neighbours each for recall.
struct ExperimentConfig {
  std::string dataset = "uniform";   // uniform | gaussian | path to .fvecs / .csv
  Index size = 0;                    // generated object count; 0 = as many as needed
  Index dim = 100;                   // generated dimension
  std::string metric = "euclidean";
  std::vector<std::string> methods;  // empty = every method valid for the metric
  std::vector<Index> dims;           // empty = {0.8m, 0.4m, 0.2m, 0.1m, 0.05m, 2}
  Index witness = 1000;
  Index eval = 10000;
  std::size_t pairs = 100000;        // distance pairs sampled from the evaluation set
  Index shepard_objects = 50;
  Index recall_corpus = 100000;
  Index recall_queries = 100;
  std::size_t recall_k = 1000;
  Index lmds_landmarks = 0;          // 0 = the whole witness set
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::filesystem::path out = "nsx-out";
  std::filesystem::path cache;       // empty = <out>/cache
  int reps = 5;
  Index bench_objects = 1000;
  std::vector<Index> angle_dims = {10, 100, 1000};
  std::size_t angle_samples = 100000;
  std::size_t bins = 60;

  /// Sets one key from its text form; throws ConfigError for an unknown key
  /// or a malformed value.
  void set(std::string_view key, std::string_view value);

  /// key=value lines; blank lines and lines starting with '#' are ignored.
  void load_file(const std::filesystem::path& path);

  /// Applies NSX_<KEY> environment variables (key upper-cased, e.g. NSX_WITNESS).
  void load_environment();

  /// Sorted descending, duplicates removed; resolves the automatic list.
  std::vector<Index> target_dims(Index input_dim) const;
  /// Requested methods, or the automatic set for `metric_has_coordinates`.
  std::vector<std::string> method_list(bool metric_has_coordinates) const;
  std::filesystem::path cache_dir() const { return cache.empty() ? out / "cache" : cache; }

  /// Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  static const std::vector<std::string>& keys();
};

inline const std::vector<std::string> kAllMethods = {"zen", "lwb", "upb", "pca", "mds", "lmds", "rp"};

}  // namespace nsx
