#pragma once

#include <cstdint>

#include "nsx/metrics.hpp"
#include "nsx/types.hpp"

namespace nsx {

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kEigenTolerance = 1e-10;

/// y = ((x - centering) * matrix) * scale + offset, row-wise.
struct LinearTransform {
  Matrix matrix;      // m x k
  Vector centering;   // empty or m entries
  Vector offset;      // empty or k entries
  double scale = 1.0;

  Index input_dimension() const { return matrix.rows(); }
  Index output_dimension() const { return matrix.cols(); }
  /// Throws InvalidArgument if the parts are inconsistent or non-finite.
  void validate() const;
};

/// Single-object application. Bit-identical to the matching row of the batch
/// overload.
Vector apply_linear(const LinearTransform& t, ConstSpan row);
RowMatrix apply_linear(const LinearTransform& t, const RowMatrix& data);

/// Sparse random projection with entries sqrt(3) * {+1, 0, -1} drawn with
/// probabilities 1/6, 2/3, 1/6. The 1/sqrt(k) factor that preserves expected
/// squared norms is carried in `scale`.
LinearTransform rp_fit(Index m, Index k, std::uint64_t seed);

struct PcaFit {
  LinearTransform transform;  // columns = leading principal directions
  double explained = 0.0;     // sum of the k largest eigenvalues / sum of all
  Vector eigenvalues;         // all m covariance eigenvalues, descending
  bool rank_deficient = false;  // fewer than k directions carry variance
};

/// Principal components of the centred witness rows (n > k).
PcaFit pca_fit(const RowMatrix& witness, Index k);

/// Smallest k whose leading eigenvalues reach `fraction` of the total.
Index components_for_variance(const Vector& descending_eigenvalues, double fraction);

/// Eigendecomposition of the double-centred squared distance matrix,
/// shared by classical MDS and landmark MDS. Computed once, then queried for
/// any target dimension.
class ClassicalScaling {
 public:
  /// `distances` must be square, symmetric, zero-diagonal and nonnegative.
  explicit ClassicalScaling(const Matrix& distances);

  Index size() const { return eigenvalues_.size(); }
  const Vector& eigenvalues() const { return eigenvalues_; }   // descending
  const Matrix& eigenvectors() const { return eigenvectors_; }
  const Vector& mean_squared_distances() const { return mean_sq_; }

  /// Number of eigenvalues above kEigenTolerance * largest.
  Index positive_rank() const;
  /// Some eigenvalue is negative beyond tolerance (input not Euclidean).
  bool has_negative_eigenvalues() const;

  /// n x k coordinates; directions without positive eigenvalue are zero.
  RowMatrix embedding(Index k) const;
  /// k x n factor whose rows are v_i / sqrt(lambda_i) (zero where lambda is not positive).
  Matrix pseudo_inverse_factor(Index k) const;

 private:
  bool usable(Index i) const;

  Vector eigenvalues_;
  Matrix eigenvectors_;
  Vector mean_sq_;
};

struct MdsFit {
  RowMatrix embedding;          // n x k
  Vector eigenvalues;           // descending
  bool rank_deficient = false;  // fewer than k positive eigenvalues
  bool negative_eigenvalues = false;  // truncated to zero
};

/// Classical MDS of an n x n distance matrix into k dimensions.
MdsFit mds_fit(const Matrix& distances, Index k);

struct MdsExtension {
  LinearTransform transform;
  double residual = 0.0;        // ||s Y Q - W||_F / ||W||_F on the centred witness
  bool rank_deficient = false;
};

/// Out-of-sample extension of an MDS embedding of Euclidean witness rows.
///
/// Orthogonal Procrustes with uniform scaling fits s * Q (k x m, orthonormal
/// rows) mapping the centred embedding onto the centred witness; the
/// pseudo-inverse of s * Q then maps new rows into the embedding space.
MdsExtension mds_extend(const RowMatrix& witness, const RowMatrix& embedding);

/// Landmark MDS: classical MDS on l landmarks, then distance-based insertion.
struct LmdsTransform {
  RowMatrix landmarks;
  Metric metric;
  RowMatrix landmark_embedding;  // l x k, centred columns
  Vector mean_sq_landmark_dists;  // l
  Matrix pseudo_inverse_factor;   // k x l
  bool rank_deficient = false;

  Index dimension() const { return landmark_embedding.cols(); }
};

/// Requires l > k.
LmdsTransform lmds_fit(RowMatrix landmarks, Metric metric, Index k);
/// Same, reusing a decomposition of the landmark distance matrix.
LmdsTransform lmds_from_scaling(RowMatrix landmarks, Metric metric, const ClassicalScaling& scaling,
                                Index k);

/// x = -1/2 * P * (d^2 - mean_sq), using exactly l metric evaluations.
Vector lmds_transform(const LmdsTransform& t, ConstSpan object);
RowMatrix lmds_transform(const LmdsTransform& t, const RowMatrix& objects);

/// Pairwise distance matrix of the rows under `metric`.
Matrix distance_matrix(const RowMatrix& rows, const Metric& metric);

}  // namespace nsx
