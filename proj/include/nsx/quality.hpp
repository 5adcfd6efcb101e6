#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nsx/types.hpp"

namespace nsx {

/// Parallel samples of true distances (delta) and reduced distances (zeta)
/// over the same object pairs.
struct DistancePairSample {
  std::vector<double> delta;
  std::vector<double> zeta;

  std::size_t size() const { return delta.size(); }
  /// Throws InvalidArgument on unequal lengths or negative/non-finite values.
  void validate() const;
};

/// Least-squares non-decreasing fit of `values` taken in the order of `key`
/// (pool adjacent violators). Equal keys are pooled first. The result is
/// returned in the caller's original order.
std::vector<double> isotonic_fit(std::span<const double> key, std::span<const double> values);

/// Kruskal stress-1 of the Shepard relation between reduced and true
/// distances: d* = isotonic_fit(zeta, delta) and
/// S = sqrt(sum (delta - d*)^2 / sum delta^2).
/// Zero exactly when delta is a non-decreasing function of zeta; depends on
/// zeta only through its ordering. Throws InvalidArgument if zeta is all zero.
double kruskal_stress(const DistancePairSample& sample);

struct SammonStress {
  double value = 0.0;
  std::size_t excluded_zero_delta = 0;
};

/// (1 / sum delta) * sum (delta - zeta)^2 / delta over pairs with delta > 0.
SammonStress sammon_stress(const DistancePairSample& sample);

/// sum (delta - zeta)^2.
double quadratic_loss(const DistancePairSample& sample);

/// (q_max - q) / q_max for each raw loss, q_max taken over the whole set.
/// All ones when every loss is zero.
std::vector<double> normalize_quadratic_losses(std::span<const double> raw);

struct SpearmanRho {
  double rho = 0.0;
  bool undefined = false;  // a sequence was constant; rho reported as 0
};

/// 1 - 6 sum (rank(delta) - rank(zeta))^2 / (T^3 - T) with tied values
/// given their average rank. Requires T >= 2.
SpearmanRho spearman_rho(const DistancePairSample& sample);

/// Average ranks (1-based) of `values`.
std::vector<double> average_ranks(std::span<const double> values);

/// Logistic relevance of a neighbour at `rank` in a true list of the given
/// length: 1 - 1 / (1 + exp(-(rank - L/2) / (L/10))). For L = 1000 this is
/// 1 - 1/(1 + exp(-(rank - 500)/100)).
double relevance(double rank, std::size_t list_length = 1000);

/// Unnormalised DCG of a reduced-space neighbour list against the true list:
/// sum over positions p = 1..L of (2^R - 1) / log2(p + 1), where R is the
/// relevance of the zero-based position of reduced[p] in the true list
/// (0 when absent). Lists must have equal length; true ids must be unique.
double dcg_raw(std::span<const ObjectId> true_nn, std::span<const ObjectId> reduced_nn);

/// dcg_raw of a list against itself; 66.0435 for L = 1000.
double dcg_perfect(std::size_t list_length);

/// dcg_raw / dcg_perfect, in [0, 1].
double dcg_recall(std::span<const ObjectId> true_nn, std::span<const ObjectId> reduced_nn);

struct AngleStats {
  double mean = 0.0;
  double stdev = 0.0;
  std::vector<double> angles;
};

/// Monte-Carlo distribution of the angle theta at b between a - b and c - b.
/// a and b are uniform in [0,1)^m; c = b + (w - 1/2) with w uniform in
/// [0,1)^m, i.e. c is displaced from b by a bounded zero-mean random vector.
/// Returns the sample mean and standard deviation of theta.
AngleStats angle_distribution(Index dim, std::size_t samples, std::uint64_t seed);

/// All quality measures for one (method, dimension) cell.
struct QualityReport {
  double kruskal = 0.0;
  double sammon = 0.0;
  std::size_t sammon_excluded = 0;
  double quadratic_raw = 0.0;
  double spearman = 0.0;
  bool spearman_undefined = false;
  std::optional<double> recall;

  // Normalised into [0, 1], 1 meaning a perfect reduction.
  double kruskal_quality() const;
  double sammon_quality() const;
  double spearman_quality() const;
};

QualityReport assess(const DistancePairSample& sample);

/// Clamp into [0, 1].
double clamp_unit(double x);

}  // namespace nsx
