#include "nsx/quality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>

#include "nsx/errors.hpp"
#include "nsx/rng.hpp"

namespace nsx {

void DistancePairSample::validate() const {
  if (delta.size() != zeta.size()) {
    throw InvalidArgument("DistancePairSample: delta and zeta lengths differ");
  }
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!(delta[i] >= 0.0) || !std::isfinite(delta[i]) || !(zeta[i] >= 0.0) ||
        !std::isfinite(zeta[i])) {
      throw InvalidArgument("DistancePairSample: values must be finite and nonnegative");
    }
  }
}

std::vector<double> isotonic_fit(std::span<const double> key, std::span<const double> values) {
  const std::size_t n = key.size();
  if (values.size() != n) throw InvalidArgument("isotonic_fit: sequences differ in length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

  struct Block {
    double sum;
    double weight;
    std::size_t end;  // one past the last position in `order`
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  blocks.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    // Tie group: equal keys form one initial block.
    std::size_t j = i;
    double sum = 0.0;
    while (j < n && key[order[j]] == key[order[i]]) sum += values[order[j++]];
    blocks.push_back({sum, static_cast<double>(j - i), j});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().weight += top.weight;
      blocks.back().end = top.end;
    }
    i = j;
  }

  std::vector<double> fitted(n);
  std::size_t start = 0;
  for (const Block& b : blocks) {
    const double m = b.mean();
    for (std::size_t p = start; p < b.end; ++p) fitted[order[p]] = m;
    start = b.end;
  }
  return fitted;
}

double kruskal_stress(const DistancePairSample& sample) {
  sample.validate();
  if (sample.size() == 0) throw InvalidArgument("kruskal_stress: empty sample");
  if (std::all_of(sample.zeta.begin(), sample.zeta.end(), [](double z) { return z == 0.0; })) {
    throw InvalidArgument("kruskal_stress: all reduced distances are zero");
  }
  const auto fitted = isotonic_fit(sample.zeta, sample.delta);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double r = sample.delta[i] - fitted[i];
    num += r * r;
    den += sample.delta[i] * sample.delta[i];
  }
  if (!(den > 0.0)) throw InvalidArgument("kruskal_stress: all true distances are zero");
  return std::sqrt(num / den);
}

SammonStress sammon_stress(const DistancePairSample& sample) {
  sample.validate();
  SammonStress out;
  double total = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double d = sample.delta[i];
    if (d == 0.0) {
      ++out.excluded_zero_delta;
      continue;
    }
    const double e = d - sample.zeta[i];
    total += d;
    acc += e * e / d;
  }
  if (!(total > 0.0)) throw InvalidArgument("sammon_stress: no pair with positive true distance");
  out.value = acc / total;
  return out;
}

double quadratic_loss(const DistancePairSample& sample) {
  sample.validate();
  if (sample.size() == 0) throw InvalidArgument("quadratic_loss: empty sample");
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double e = sample.delta[i] - sample.zeta[i];
    acc += e * e;
  }
  return acc;
}

std::vector<double> normalize_quadratic_losses(std::span<const double> raw) {
  double qmax = 0.0;
  for (double q : raw) qmax = std::max(qmax, q);
  std::vector<double> out(raw.size(), 1.0);
  if (qmax > 0.0) {
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = clamp_unit((qmax - raw[i]) / qmax);
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t p = i; p < j; ++p) ranks[order[p]] = r;
    i = j;
  }
  return ranks;
}

SpearmanRho spearman_rho(const DistancePairSample& sample) {
  sample.validate();
  const std::size_t t = sample.size();
  if (t < 2) throw InvalidArgument("spearman_rho: need at least two pairs");
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(sample.delta) || constant(sample.zeta)) return {0.0, true};
  const auto rd = average_ranks(sample.delta);
  const auto rz = average_ranks(sample.zeta);
  double acc = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const double d = rd[i] - rz[i];
    acc += d * d;
  }
  const double td = static_cast<double>(t);
  return {1.0 - 6.0 * acc / (td * td * td - td), false};
}

double relevance(double rank, std::size_t list_length) {
  if (list_length == 0) throw InvalidArgument("relevance: empty list");
  const double l = static_cast<double>(list_length);
  return 1.0 - 1.0 / (1.0 + std::exp(-(rank - l / 2.0) / (l / 10.0)));
}

double dcg_raw(std::span<const ObjectId> true_nn, std::span<const ObjectId> reduced_nn) {
  if (true_nn.size() != reduced_nn.size()) {
    throw InvalidArgument("dcg_recall: lists differ in length (" + std::to_string(true_nn.size()) +
                          " vs " + std::to_string(reduced_nn.size()) + ")");
  }
  const std::size_t len = true_nn.size();
  std::unordered_map<ObjectId, std::size_t> position;
  position.reserve(len * 2);
  for (std::size_t i = 0; i < len; ++i) {
    if (!position.emplace(true_nn[i], i).second) {
      throw InvalidArgument("dcg_recall: duplicate id in true neighbour list");
    }
  }
  double acc = 0.0;
  for (std::size_t p = 0; p < len; ++p) {
    const auto it = position.find(reduced_nn[p]);
    if (it == position.end()) continue;
    const double gain = std::exp2(relevance(static_cast<double>(it->second), len)) - 1.0;
    acc += gain / std::log2(static_cast<double>(p) + 2.0);
  }
  return acc;
}

double dcg_perfect(std::size_t list_length) {
  double acc = 0.0;
  for (std::size_t p = 0; p < list_length; ++p) {
    acc += (std::exp2(relevance(static_cast<double>(p), list_length)) - 1.0) /
           std::log2(static_cast<double>(p) + 2.0);
  }
  return acc;
}

double dcg_recall(std::span<const ObjectId> true_nn, std::span<const ObjectId> reduced_nn) {
  const double raw = dcg_raw(true_nn, reduced_nn);
  if (true_nn.empty()) throw InvalidArgument("dcg_recall: empty lists");
  return clamp_unit(raw / dcg_perfect(true_nn.size()));
}

AngleStats angle_distribution(Index dim, std::size_t samples, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("angle_distribution: need dim >= 2");
  if (samples < 2) throw InvalidArgument("angle_distribution: need at least two samples");
  Rng rng(seed);
  AngleStats stats;
  stats.angles.reserve(samples);
  std::vector<double> a(dim), b(dim);
  for (std::size_t s = 0; s < samples; ++s) {
    for (Index i = 0; i < dim; ++i) a[i] = rng.uniform();
    for (Index i = 0; i < dim; ++i) b[i] = rng.uniform();
    double dot = 0.0, na = 0.0, nc = 0.0;
    for (Index i = 0; i < dim; ++i) {
      const double x = a[i] - b[i];
      const double y = rng.uniform() - 0.5;  // c - b
      dot += x * y;
      na += x * x;
      nc += y * y;
    }
    if (na == 0.0 || nc == 0.0) continue;
    const double c = std::clamp(dot / std::sqrt(na * nc), -1.0, 1.0);
    stats.angles.push_back(std::acos(c));
  }
  const double n = static_cast<double>(stats.angles.size());
  stats.mean = std::accumulate(stats.angles.begin(), stats.angles.end(), 0.0) / n;
  double var = 0.0;
  for (double t : stats.angles) var += (t - stats.mean) * (t - stats.mean);
  stats.stdev = std::sqrt(var / (n - 1.0));
  return stats;
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double QualityReport::kruskal_quality() const { return clamp_unit(1.0 - kruskal); }
double QualityReport::sammon_quality() const { return clamp_unit(1.0 - sammon); }
double QualityReport::spearman_quality() const { return clamp_unit(spearman); }

QualityReport assess(const DistancePairSample& sample) {
  QualityReport r;
  r.kruskal = kruskal_stress(sample);
  const SammonStress s = sammon_stress(sample);
  r.sammon = s.value;
  r.sammon_excluded = s.excluded_zero_delta;
  r.quadratic_raw = quadratic_loss(sample);
  const SpearmanRho rho = spearman_rho(sample);
  r.spearman = rho.rho;
  r.spearman_undefined = rho.undefined;
  return r;
}

}  // namespace nsx
