#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nsx/types.hpp"

namespace nsx {

/// Tolerance on |sum - 1| for probability-vector inputs.
inline constexpr double kL1Tolerance = 1e-9;

// Distance functions over equal-length real vectors. All are symmetric in
// their arguments bit-for-bit and throw DimensionMismatch on unequal sizes.

double euclidean(ConstSpan u, ConstSpan v);

/// Euclidean distance between the l2-normalised inputs; throws DomainError on a
/// zero vector.
double cosine_l2normed(ConstSpan u, ConstSpan v);

/// Jensen-Shannon distance (square root of the base-2 divergence). Inputs must
/// be nonnegative and sum to 1 within kL1Tolerance; they are renormalised
/// before use. 0 log 0 is taken as 0.
double jensen_shannon(ConstSpan u, ConstSpan v);

/// sqrt(1/2 sum (u_i - v_i)^2 / (u_i + v_i)) with 0/0 taken as 0. Same domain
/// as jensen_shannon.
double triangular(ConstSpan u, ConstSpan v);

/// sqrt((u - v)^T M (u - v)). M is not validated here; use Metric.
double quadratic_form(const Matrix& m, ConstSpan u, ConstSpan v);

enum class MetricKind { Euclidean, CosineL2Normed, JensenShannon, Triangular, QuadraticForm };

/// A named distance function plus its domain constraints. Immutable and cheap
/// to copy; the quadratic-form matrix is shared.
class Metric {
 public:
  static Metric euclidean();
  static Metric cosine();
  static Metric jensen_shannon();
  static Metric triangular();
  /// Validates symmetry (1e-12) and positive semi-definiteness (eigenvalues
  /// >= -1e-10); throws DomainError otherwise.
  static Metric quadratic_form(Matrix m);

  /// Accepts "euclidean", "cosine", "jsd"/"jensen-shannon", "triangular".
  /// Quadratic form needs a matrix and cannot be built from a name alone.
  static Metric from_name(std::string_view name);

  MetricKind kind() const { return kind_; }
  std::string_view name() const;

  double operator()(ConstSpan u, ConstSpan v) const;
  double distance(const RowMatrix& rows, Index i, Index j) const {
    return (*this)(row_span(rows, i), row_span(rows, j));
  }

  bool requires_probability_input() const {
    return kind_ == MetricKind::JensenShannon || kind_ == MetricKind::Triangular;
  }

  /// Throws DomainError if `v` is outside the metric's domain.
  void check_domain(ConstSpan v) const;

  const Matrix* qf_matrix() const { return qf_ ? qf_.get() : nullptr; }

  /// Rows mapped into Euclidean coordinates where the metric is the plain l2
  /// distance, if such an explicit embedding exists (Euclidean: identity;
  /// cosine: l2 normalisation; quadratic form: multiplication by M^(1/2)).
  /// Returns nullopt for Jensen-Shannon and Triangular.
  std::optional<RowMatrix> coordinates(const RowMatrix& rows) const;

 private:
  explicit Metric(MetricKind kind) : kind_(kind) {}

  MetricKind kind_;
  std::shared_ptr<const Matrix> qf_;
  std::shared_ptr<const Matrix> qf_root_;
};

}  // namespace nsx
