#include "nsx/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsx/errors.hpp"

namespace nsx {
namespace {

// Apex over the first `n` vertices of `coords` (an n x (n-1) leading block is
// used). Writes n values to `out`. This follows the ApexAddition update order:
// start from [d_0, 0, ..., 0]; at step i move the provisional altitude o[i-1]
// so that the distance to vertex i is met, then place the remaining height in
// o[i].
void apex_into(const Matrix& coords, Index n, ConstSpan distances, double* out) {
  if (static_cast<Index>(distances.size()) != n) {
    throw DimensionMismatch("apex_addition: expected " + std::to_string(n) + " distances, got " +
                            std::to_string(distances.size()));
  }
  for (Index i = 0; i < n; ++i) {
    if (!(distances[i] >= 0.0) || !std::isfinite(distances[i])) {
      throw InvalidArgument("apex_addition: distances must be finite and nonnegative");
    }
  }
  std::fill(out, out + n, 0.0);
  out[0] = distances[0];
  for (Index i = 1; i < n; ++i) {
    // l = l2(base[i], out); both vectors are zero from column i onwards.
    double l2 = 0.0;
    for (Index j = 0; j < i; ++j) {
      const double d = coords(i, j) - out[j];
      l2 += d * d;
    }
    const double delta = distances[i];
    const double x = coords(i, i - 1);
    const double y = out[i - 1];
    if (!(x > kDegeneracyTolerance)) {
      throw DegenerateSimplex("apex_addition: base altitude " + std::to_string(x) + " at vertex " +
                              std::to_string(i));
    }
    out[i - 1] = y - (delta * delta - l2) / (2.0 * x);
    const double radicand = y * y - out[i - 1] * out[i - 1];
    if (radicand >= 0.0) {
      out[i] = std::sqrt(radicand);
    } else {
      const double scale = std::max({y * y, distances[0] * distances[0], delta * delta});
      if (radicand < -kEmbedTolerance * scale) {
        throw NotEmbeddable("apex_addition: negative radicand " + std::to_string(radicand) +
                            " at vertex " + std::to_string(i));
      }
      out[i] = 0.0;
    }
  }
}

}  // namespace

BaseSimplex::BaseSimplex(Matrix coords) : coords_(std::move(coords)) {
  const Index k = coords_.rows();
  if (k < 2 || coords_.cols() != k - 1) {
    throw InvalidArgument("BaseSimplex: expected k x (k-1) coordinates with k >= 2");
  }
  if (!coords_.allFinite()) throw InvalidArgument("BaseSimplex: non-finite coordinate");
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k - 1; ++j) {
      if (coords_(i, j) != 0.0) {
        throw InvalidArgument("BaseSimplex: entry above the sub-diagonal is nonzero");
      }
    }
    if (i >= 1 && coords_(i, i - 1) < 0.0) {
      throw InvalidArgument("BaseSimplex: negative altitude");
    }
  }
}

double BaseSimplex::min_altitude() const {
  double m = coords_(1, 0);
  for (Index i = 2; i < coords_.rows(); ++i) m = std::min(m, coords_(i, i - 1));
  return m;
}

BaseSimplex build_base_simplex(const Matrix& distances) {
  const Index k = distances.rows();
  if (k < 2 || distances.cols() != k) {
    throw InvalidArgument("build_base_simplex: need a square matrix with k >= 2");
  }
  const double scale = std::max(1.0, distances.cwiseAbs().maxCoeff());
  for (Index i = 0; i < k; ++i) {
    if (distances(i, i) != 0.0) throw InvalidArgument("build_base_simplex: nonzero diagonal");
    for (Index j = 0; j < k; ++j) {
      if (!(distances(i, j) >= 0.0) || !std::isfinite(distances(i, j))) {
        throw InvalidArgument("build_base_simplex: distances must be finite and nonnegative");
      }
      if (std::abs(distances(i, j) - distances(j, i)) > 1e-12 * scale) {
        throw InvalidArgument("build_base_simplex: matrix is not symmetric");
      }
    }
  }

  Matrix coords = Matrix::Zero(k, k - 1);
  coords(1, 0) = distances(0, 1);
  if (!(coords(1, 0) > kDegeneracyTolerance)) {
    throw DegenerateSimplex("build_base_simplex: vertices 0 and 1 coincide");
  }
  Vector row_distances(k);
  Vector apex(k);
  for (Index i = 2; i < k; ++i) {
    for (Index j = 0; j < i; ++j) row_distances[j] = distances(i, j);
    apex_into(coords, i, ConstSpan(row_distances.data(), static_cast<std::size_t>(i)), apex.data());
    if (!(apex[i - 1] > kDegeneracyTolerance)) {
      throw DegenerateSimplex("build_base_simplex: altitude " + std::to_string(apex[i - 1]) +
                              " at vertex " + std::to_string(i));
    }
    for (Index j = 0; j < i; ++j) coords(i, j) = apex[j];
  }
  return BaseSimplex(std::move(coords));
}

Vector apex_addition(const BaseSimplex& base, ConstSpan distances) {
  const Index n = base.vertex_count();
  Vector out(n);
  apex_into(base.coords(), n, distances, out.data());
  return out;
}

ReducedDistances reduced_distances(ConstSpan x, ConstSpan y) {
  if (x.size() != y.size() || x.empty()) {
    throw DimensionMismatch("reduced_distances: points must have equal, nonzero dimension");
  }
  const std::size_t last = x.size() - 1;
  double base = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    const double d = x[i] - y[i];
    base += d * d;
  }
  const double a = x[last];
  const double b = y[last];
  const double lwb2 = base + (a - b) * (a - b);
  const double zen2 = base + a * a + b * b;
  const double upb2 = base + (a + b) * (a + b);
  const double zen = std::sqrt(zen2);
  // Rounding can misorder the three by an ulp; the ordering is exact in reals.
  return {std::min(std::sqrt(lwb2), zen), zen, std::max(std::sqrt(upb2), zen)};
}

double lwb_distance(ConstSpan x, ConstSpan y) { return reduced_distances(x, y).lwb; }
double zen_distance(ConstSpan x, ConstSpan y) { return reduced_distances(x, y).zen; }
double upb_distance(ConstSpan x, ConstSpan y) { return reduced_distances(x, y).upb; }

double implied_cos_theta(ConstSpan x, ConstSpan y, double true_distance) {
  const ReducedDistances r = reduced_distances(x, y);
  const double a = x.back();
  const double b = y.back();
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("implied_cos_theta: angle undefined for zero altitude");
  }
  return (r.zen * r.zen - true_distance * true_distance) / (2.0 * a * b);
}

NSimplexTransform::NSimplexTransform(Metric metric, RowMatrix references, BaseSimplex base)
    : metric_(std::move(metric)), references_(std::move(references)), base_(std::move(base)) {
  if (base_.vertex_count() != references_.rows()) {
    throw InvalidArgument("NSimplexTransform: base simplex size does not match reference count");
  }
}

NSimplexTransform NSimplexTransform::fit(RowMatrix references, Metric metric) {
  const Index k = references.rows();
  if (k < 2) throw InvalidArgument("NSimplexTransform::fit: need at least 2 references");
  for (Index i = 0; i < k; ++i) metric.check_domain(row_span(references, i));
  Matrix d = Matrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < i; ++j) {
      d(i, j) = d(j, i) = metric.distance(references, i, j);
    }
  }
  BaseSimplex base = build_base_simplex(d);
  return NSimplexTransform(std::move(metric), std::move(references), std::move(base));
}

ReducedPoint NSimplexTransform::transform(ConstSpan object) const {
  const Index k = dimension();
  Vector distances(k);
  for (Index i = 0; i < k; ++i) distances[i] = metric_(object, row_span(references_, i));
  return apex_addition(base_, as_span(distances));
}

RowMatrix NSimplexTransform::transform(const RowMatrix& objects) const {
  const Index k = dimension();
  RowMatrix out(objects.rows(), k);
  Vector distances(k);
  for (Index r = 0; r < objects.rows(); ++r) {
    const ConstSpan object = row_span(objects, r);
    for (Index i = 0; i < k; ++i) distances[i] = metric_(object, row_span(references_, i));
    apex_into(base_.coords(), k, as_span(distances), out.data() + r * k);
  }
  return out;
}

NSimplexTransform fit_random_references(const RowMatrix& pool, Index k, const Metric& metric,
                                        Rng& rng, int max_attempts) {
  if (k < 2 || k > pool.rows()) {
    throw InvalidArgument("fit_random_references: need 2 <= k <= pool size");
  }
  for (int attempt = 1;; ++attempt) {
    const auto chosen = rng.sample(static_cast<std::size_t>(pool.rows()), static_cast<std::size_t>(k));
    RowMatrix refs(k, pool.cols());
    for (Index i = 0; i < k; ++i) refs.row(i) = pool.row(static_cast<Index>(chosen[i]));
    try {
      return NSimplexTransform::fit(std::move(refs), metric);
    } catch (const DegenerateSimplex&) {
      if (attempt >= max_attempts) throw;
    }
  }
}

}  // namespace nsx
