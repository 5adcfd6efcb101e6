#include "nsx/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "nsx/errors.hpp"
#include "nsx/rng.hpp"

namespace nsx {
namespace {

// Rows per block in batch application. Each output element is accumulated in
// the same order as the single-row path.
constexpr Index kApplyBlock = 8;

void project_rows(const LinearTransform& t, const double* in, Index rows, double* out) {
  const Index m = t.input_dimension();
  const Index k = t.output_dimension();
  const bool centred = t.centering.size() != 0;
  // Centred block stored column by column so the row loop below is contiguous.
  double block[kApplyBlock * 1024];
  std::vector<double> heap;
  double* xb = block;
  if (rows * m > static_cast<Index>(std::size(block))) {
    heap.resize(static_cast<std::size_t>(rows * m));
    xb = heap.data();
  }
  for (Index r = 0; r < rows; ++r) {
    for (Index j = 0; j < m; ++j) xb[j * rows + r] = in[r * m + j] - (centred ? t.centering[j] : 0.0);
  }
  const bool offset = t.offset.size() != 0;
  double acc[kApplyBlock];
  for (Index col = 0; col < k; ++col) {
    const double* mc = t.matrix.col(col).data();
    std::fill(acc, acc + rows, 0.0);
    for (Index j = 0; j < m; ++j) {
      const double w = mc[j];
      const double* x = xb + j * rows;
      for (Index r = 0; r < rows; ++r) acc[r] += x[r] * w;
    }
    for (Index r = 0; r < rows; ++r) {
      double v = acc[r] * t.scale;
      if (offset) v += t.offset[col];
      out[r * k + col] = v;
    }
  }
}

void check_square_distances(const Matrix& d, const char* who) {
  const Index n = d.rows();
  if (n < 1 || d.cols() != n) throw InvalidArgument(std::string(who) + ": need a square matrix");
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw InvalidArgument(std::string(who) + ": nonzero diagonal");
    for (Index j = 0; j < n; ++j) {
      if (!(d(i, j) >= 0.0) || !std::isfinite(d(i, j))) {
        throw InvalidArgument(std::string(who) + ": distances must be finite and nonnegative");
      }
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * scale) {
        throw InvalidArgument(std::string(who) + ": matrix is not symmetric");
      }
    }
  }
}

}  // namespace

void LinearTransform::validate() const {
  if (matrix.rows() < 1 || matrix.cols() < 1) throw InvalidArgument("LinearTransform: empty matrix");
  if (matrix.cols() > matrix.rows()) throw InvalidArgument("LinearTransform: k exceeds m");
  if (!matrix.allFinite()) throw InvalidArgument("LinearTransform: non-finite matrix entry");
  if (centering.size() != 0 && centering.size() != matrix.rows()) {
    throw InvalidArgument("LinearTransform: centering length does not match m");
  }
  if (offset.size() != 0 && offset.size() != matrix.cols()) {
    throw InvalidArgument("LinearTransform: offset length does not match k");
  }
  if (!centering.allFinite() || !offset.allFinite() || !std::isfinite(scale)) {
    throw InvalidArgument("LinearTransform: non-finite parameter");
  }
}

Vector apply_linear(const LinearTransform& t, ConstSpan row) {
  if (static_cast<Index>(row.size()) != t.input_dimension()) {
    throw DimensionMismatch("apply_linear: row has " + std::to_string(row.size()) +
                            " components, transform expects " +
                            std::to_string(t.input_dimension()));
  }
  Vector out(t.output_dimension());
  project_rows(t, row.data(), 1, out.data());
  return out;
}

RowMatrix apply_linear(const LinearTransform& t, const RowMatrix& data) {
  if (data.cols() != t.input_dimension()) {
    throw DimensionMismatch("apply_linear: data has " + std::to_string(data.cols()) +
                            " columns, transform expects " + std::to_string(t.input_dimension()));
  }
  RowMatrix out(data.rows(), t.output_dimension());
  for (Index r = 0; r < data.rows(); r += kApplyBlock) {
    const Index rows = std::min(kApplyBlock, data.rows() - r);
    project_rows(t, data.data() + r * data.cols(), rows, out.data() + r * out.cols());
  }
  return out;
}

LinearTransform rp_fit(Index m, Index k, std::uint64_t seed) {
  if (m < 1 || k < 1 || k > m) throw InvalidArgument("rp_fit: need 1 <= k <= m");
  Rng rng(seed);
  const double s3 = std::sqrt(3.0);
  LinearTransform t;
  t.matrix.resize(m, k);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) {
      const auto u = rng.below(6);
      t.matrix(i, j) = u == 0 ? s3 : (u == 1 ? -s3 : 0.0);
    }
  }
  t.scale = 1.0 / std::sqrt(static_cast<double>(k));
  return t;
}

PcaFit pca_fit(const RowMatrix& witness, Index k) {
  const Index n = witness.rows();
  const Index m = witness.cols();
  if (k < 1 || k > m) throw InvalidArgument("pca_fit: need 1 <= k <= m");
  if (n <= k) throw InvalidArgument("pca_fit: need more witness rows than target dimensions");
  if (!witness.allFinite()) throw InvalidArgument("pca_fit: non-finite witness");

  const Vector mean = witness.colwise().mean().transpose();
  const RowMatrix centred = witness.rowwise() - mean.transpose();
  const Matrix cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw InternalError("pca_fit: eigendecomposition failed");

  // Eigen returns ascending order.
  PcaFit fit;
  fit.eigenvalues = eig.eigenvalues().reverse().cwiseMax(0.0);
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();
  fit.transform.matrix = vectors.leftCols(k);
  fit.transform.centering = mean;
  const double total = fit.eigenvalues.sum();
  fit.explained = total > 0.0 ? fit.eigenvalues.head(k).sum() / total : 1.0;
  const double largest = fit.eigenvalues.size() ? fit.eigenvalues[0] : 0.0;
  fit.rank_deficient = !(fit.eigenvalues[k - 1] > kEigenTolerance * largest);
  return fit;
}

Index components_for_variance(const Vector& eigenvalues, double fraction) {
  const double total = eigenvalues.sum();
  if (!(total > 0.0)) return 0;
  double acc = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    acc += eigenvalues[i];
    if (acc / total >= fraction) return i + 1;
  }
  return eigenvalues.size();
}

ClassicalScaling::ClassicalScaling(const Matrix& distances) {
  check_square_distances(distances, "ClassicalScaling");
  const Index n = distances.rows();
  const Matrix sq = distances.cwiseProduct(distances);
  mean_sq_ = sq.colwise().mean().transpose();
  const double grand = mean_sq_.mean();
  // B = -1/2 J D^2 J, expanded to avoid forming J.
  Matrix b(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (sq(i, j) - mean_sq_[i] - mean_sq_[j] + grand);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) throw InternalError("ClassicalScaling: eigendecomposition failed");
  eigenvalues_ = eig.eigenvalues().reverse();
  eigenvectors_ = eig.eigenvectors().rowwise().reverse();
}

bool ClassicalScaling::usable(Index i) const {
  const double largest = eigenvalues_.size() ? eigenvalues_[0] : 0.0;
  return largest > 0.0 && eigenvalues_[i] > kEigenTolerance * largest;
}

Index ClassicalScaling::positive_rank() const {
  Index r = 0;
  for (Index i = 0; i < eigenvalues_.size(); ++i) r += usable(i) ? 1 : 0;
  return r;
}

bool ClassicalScaling::has_negative_eigenvalues() const {
  const double largest = eigenvalues_.size() ? std::max(eigenvalues_[0], 0.0) : 0.0;
  return eigenvalues_.size() && eigenvalues_.minCoeff() < -kEigenTolerance * std::max(largest, 1e-300);
}

RowMatrix ClassicalScaling::embedding(Index k) const {
  if (k < 1 || k > size()) throw InvalidArgument("ClassicalScaling: k out of range");
  RowMatrix out = RowMatrix::Zero(size(), k);
  for (Index c = 0; c < k; ++c) {
    if (usable(c)) out.col(c) = eigenvectors_.col(c) * std::sqrt(eigenvalues_[c]);
  }
  return out;
}

Matrix ClassicalScaling::pseudo_inverse_factor(Index k) const {
  if (k < 1 || k > size()) throw InvalidArgument("ClassicalScaling: k out of range");
  Matrix out = Matrix::Zero(k, size());
  for (Index c = 0; c < k; ++c) {
    if (usable(c)) out.row(c) = eigenvectors_.col(c).transpose() / std::sqrt(eigenvalues_[c]);
  }
  return out;
}

MdsFit mds_fit(const Matrix& distances, Index k) {
  const ClassicalScaling scaling(distances);
  MdsFit fit;
  fit.embedding = scaling.embedding(k);
  fit.eigenvalues = scaling.eigenvalues();
  fit.rank_deficient = scaling.positive_rank() < k;
  fit.negative_eigenvalues = scaling.has_negative_eigenvalues();
  return fit;
}

MdsExtension mds_extend(const RowMatrix& witness, const RowMatrix& embedding) {
  const Index n = witness.rows();
  const Index m = witness.cols();
  const Index k = embedding.cols();
  if (embedding.rows() != n) throw DimensionMismatch("mds_extend: row counts differ");
  if (k < 1 || k > m) throw InvalidArgument("mds_extend: need 1 <= k <= m");

  const Vector w_mean = witness.colwise().mean().transpose();
  const Vector y_mean = embedding.colwise().mean().transpose();
  const Matrix wc = witness.rowwise() - w_mean.transpose();
  const Matrix yc = embedding.rowwise() - y_mean.transpose();
  const double y_norm2 = yc.squaredNorm();
  if (!(y_norm2 > 0.0)) throw InvalidArgument("mds_extend: embedding has no spread");

  // Maximise tr(Q^T Y^T W) over Q with orthonormal rows: Q = U V^T from the
  // SVD of Y^T W; the optimal uniform scale is tr(S) / ||Y||^2.
  Eigen::JacobiSVD<Matrix> svd(yc.transpose() * wc, Eigen::ComputeFullU | Eigen::ComputeThinV);
  const Matrix q = svd.matrixU() * svd.matrixV().transpose();  // k x m
  const double s = svd.singularValues().sum() / y_norm2;
  if (!(s > 0.0)) throw InvalidArgument("mds_extend: degenerate Procrustes fit");
  const Matrix t = s * q;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(t);
  MdsExtension ext;
  ext.transform.matrix = cod.pseudoInverse();  // m x k
  ext.transform.centering = w_mean;
  ext.transform.offset = y_mean;
  const double w_norm = wc.norm();
  ext.residual = w_norm > 0.0 ? (yc * t - wc).norm() / w_norm : 0.0;

  const double largest = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    rank += svd.singularValues()[i] > kEigenTolerance * largest ? 1 : 0;
  }
  ext.rank_deficient = rank < k || cod.rank() < k;
  return ext;
}

Matrix distance_matrix(const RowMatrix& rows, const Metric& metric) {
  const Index n = rows.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) d(i, j) = d(j, i) = metric.distance(rows, i, j);
  }
  return d;
}

LmdsTransform lmds_from_scaling(RowMatrix landmarks, Metric metric, const ClassicalScaling& scaling,
                                Index k) {
  const Index l = landmarks.rows();
  if (scaling.size() != l) throw DimensionMismatch("lmds: decomposition size does not match landmarks");
  if (k < 1 || l <= k) throw InvalidArgument("lmds_fit: need more landmarks than target dimensions");
  LmdsTransform t{std::move(landmarks), std::move(metric), scaling.embedding(k),
                  scaling.mean_squared_distances(), scaling.pseudo_inverse_factor(k),
                  scaling.positive_rank() < k};
  return t;
}

LmdsTransform lmds_fit(RowMatrix landmarks, Metric metric, Index k) {
  if (k < 1 || landmarks.rows() <= k) {
    throw InvalidArgument("lmds_fit: need more landmarks than target dimensions");
  }
  for (Index i = 0; i < landmarks.rows(); ++i) metric.check_domain(row_span(landmarks, i));
  const ClassicalScaling scaling(distance_matrix(landmarks, metric));
  return lmds_from_scaling(std::move(landmarks), std::move(metric), scaling, k);
}

Vector lmds_transform(const LmdsTransform& t, ConstSpan object) {
  const Index l = t.landmarks.rows();
  Vector delta(l);
  for (Index i = 0; i < l; ++i) {
    const double d = t.metric(object, row_span(t.landmarks, i));
    delta[i] = d * d - t.mean_sq_landmark_dists[i];
  }
  return -0.5 * (t.pseudo_inverse_factor * delta);
}

RowMatrix lmds_transform(const LmdsTransform& t, const RowMatrix& objects) {
  RowMatrix out(objects.rows(), t.dimension());
  for (Index r = 0; r < objects.rows(); ++r) {
    out.row(r) = lmds_transform(t, row_span(objects, r)).transpose();
  }
  return out;
}

}  // namespace nsx
