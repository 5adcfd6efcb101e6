#pragma once

#include <cstdint>

#include "nsx/metrics.hpp"
#include "nsx/rng.hpp"
#include "nsx/types.hpp"

namespace nsx {

/// Altitudes at or below this (absolute) value make a simplex degenerate.
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Relative tolerance for negative radicands in apex construction. Values in
/// [-kEmbedTolerance * scale, 0) are treated as rounding noise and clamped.
inline constexpr double kEmbedTolerance = 1e-7;

/// Coordinates of k simplex vertices in (k-1)-dimensional Euclidean space.
///
/// Row i holds vertex i; entries (i, j) with j >= i are zero and (i, i-1) is
/// the nonnegative altitude of vertex i over the face spanned by vertices
/// 0..i-1. Vertex 0 sits at the origin and vertex 1 on the first axis.
class BaseSimplex {
 public:
  /// Validates the lower-triangular layout and nonnegative altitudes.
  explicit BaseSimplex(Matrix coords);

  Index vertex_count() const { return coords_.rows(); }
  const Matrix& coords() const { return coords_; }

  /// Altitude of vertex i >= 1.
  double altitude(Index i) const { return coords_(i, i - 1); }
  double min_altitude() const;

  /// l2 distance between vertices i and j.
  double vertex_distance(Index i, Index j) const { return (coords_.row(i) - coords_.row(j)).norm(); }

 private:
  Matrix coords_;
};

/// Builds the base simplex for a k x k distance matrix (k >= 2), one apex
/// addition per vertex.
///
/// Throws InvalidArgument for a malformed matrix, DegenerateSimplex when an
/// altitude is at or below kDegeneracyTolerance and NotEmbeddable when the
/// distances do not describe a Euclidean point set.
BaseSimplex build_base_simplex(const Matrix& distances);

/// Coordinates of the apex over `base` whose distance to vertex i is
/// distances[i]. The result has base.vertex_count() entries, the last being
/// the (nonnegative) altitude over the base hyperplane.
Vector apex_addition(const BaseSimplex& base, ConstSpan distances);

/// A point produced by an nSimplex transform: k coordinates, the last of
/// which is the nonnegative altitude over the base simplex.
using ReducedPoint = Vector;

struct ReducedDistances {
  double lwb;
  double zen;
  double upb;
};

/// Lower-bound, zenith and upper-bound estimates between two reduced points.
/// Satisfies lwb <= zen <= upb exactly.
ReducedDistances reduced_distances(ConstSpan x, ConstSpan y);

double lwb_distance(ConstSpan x, ConstSpan y);
double zen_distance(ConstSpan x, ConstSpan y);
double upb_distance(ConstSpan x, ConstSpan y);

/// cos of the angle between the two apex planes implied by a known true
/// distance: (zen^2 - d^2) / (2 x_k y_k). Throws DomainError if either
/// altitude is zero.
double implied_cos_theta(ConstSpan x, ConstSpan y, double true_distance);

/// Maps objects of a Hilbert-embeddable metric space to apexes over a fixed
/// base simplex built from k reference objects. Immutable after construction;
/// transform() may be called concurrently.
class NSimplexTransform {
 public:
  /// Computes the k(k-1)/2 reference distances and builds the base simplex.
  static NSimplexTransform fit(RowMatrix references, Metric metric);

  /// Reassembles a transform from stored parts (e.g. when loading from disk).
  /// The base simplex must have one vertex per reference.
  NSimplexTransform(Metric metric, RowMatrix references, BaseSimplex base);

  /// Exactly k metric evaluations.
  ReducedPoint transform(ConstSpan object) const;
  RowMatrix transform(const RowMatrix& objects) const;

  Index dimension() const { return references_.rows(); }
  Index input_dimension() const { return references_.cols(); }
  const Metric& metric() const { return metric_; }
  const RowMatrix& references() const { return references_; }
  const BaseSimplex& base() const { return base_; }

 private:
  Metric metric_;
  RowMatrix references_;
  BaseSimplex base_;
};

/// Fits a transform on k references drawn uniformly without replacement from
/// the rows of `pool`, re-drawing on DegenerateSimplex up to `max_attempts`
/// times before rethrowing.
NSimplexTransform fit_random_references(const RowMatrix& pool, Index k, const Metric& metric,
                                        Rng& rng, int max_attempts = 10);

}  // namespace nsx
