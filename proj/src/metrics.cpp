#include "nsx/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "nsx/errors.hpp"

namespace nsx {
namespace {

constexpr double kRadicandFloor = 1e-12;

void require_same_size(ConstSpan u, ConstSpan v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("metric: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()) + ")");
  }
}

// Radicands may come out slightly negative through cancellation near d = 0.
double clamped_sqrt(double radicand, double scale, const char* who) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (radicand >= -kRadicandFloor * std::max(1.0, scale)) return 0.0;
  throw InternalError(std::string(who) + ": negative radicand " + std::to_string(radicand));
}

double checked_probability_sum(ConstSpan v, const char* who) {
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) throw DomainError(std::string(who) + ": negative or non-finite component");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kL1Tolerance) {
    throw DomainError(std::string(who) + ": input not l1-normalised (sum " + std::to_string(sum) +
                      ")");
  }
  return sum;
}

// v log2(2v / (v + w)), zero when v = 0.
inline double half_kl_term(double v, double w) {
  if (v <= 0.0) return 0.0;
  return v * std::log(2.0 * v / (v + w));
}

}  // namespace

double euclidean(ConstSpan u, ConstSpan v) {
  require_same_size(u, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double cosine_l2normed(ConstSpan u, ConstSpan v) {
  require_same_size(u, v);
  double nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine: zero vector");
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] / nu - v[i] / nv;
    acc += d * d;
  }
  return std::min(std::sqrt(acc), 2.0);
}

double jensen_shannon(ConstSpan u, ConstSpan v) {
  require_same_size(u, v);
  const double su = checked_probability_sum(u, "jensen_shannon");
  const double sv = checked_probability_sum(v, "jensen_shannon");
  // K = 1/2 sum [u log2(2u/(u+v)) + v log2(2v/(u+v))], algebraically equal to
  // 1 - 1/2 sum (h(u) + h(v) - h(u+v)) for probability vectors, but every term
  // vanishes exactly when u = v.
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = su == 1.0 ? u[i] : u[i] / su;
    const double b = sv == 1.0 ? v[i] : v[i] / sv;
    acc += half_kl_term(a, b) + half_kl_term(b, a);
  }
  const double k = 0.5 * acc / std::numbers::ln2;
  return std::min(clamped_sqrt(k, 1.0, "jensen_shannon"), 1.0);
}

double triangular(ConstSpan u, ConstSpan v) {
  require_same_size(u, v);
  const double su = checked_probability_sum(u, "triangular");
  const double sv = checked_probability_sum(v, "triangular");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = su == 1.0 ? u[i] : u[i] / su;
    const double b = sv == 1.0 ? v[i] : v[i] / sv;
    const double s = a + b;
    if (s > 0.0) {
      const double d = a - b;
      acc += d * d / s;
    }
  }
  return std::min(std::sqrt(0.5 * acc), 1.0);
}

double quadratic_form(const Matrix& m, ConstSpan u, ConstSpan v) {
  require_same_size(u, v);
  if (m.rows() != static_cast<Index>(u.size()) || m.cols() != m.rows()) {
    throw DimensionMismatch("quadratic_form: matrix does not match vector dimension");
  }
  const Index n = m.rows();
  Vector d(n);
  for (Index i = 0; i < n; ++i) d[i] = u[i] - v[i];
  // Computed as sum_i d_i (sum_j m_ij d_j): swapping u and v negates d, and
  // the products are sign-symmetric, so the result is bit-identical.
  double acc = 0.0, scale = 0.0;
  for (Index i = 0; i < n; ++i) {
    double inner = 0.0;
    for (Index j = 0; j < n; ++j) inner += m(i, j) * d[j];
    acc += d[i] * inner;
    scale += d[i] * d[i];
  }
  return clamped_sqrt(acc, scale * m.cwiseAbs().maxCoeff(), "quadratic_form");
}

Metric Metric::euclidean() { return Metric(MetricKind::Euclidean); }
Metric Metric::cosine() { return Metric(MetricKind::CosineL2Normed); }
Metric Metric::jensen_shannon() { return Metric(MetricKind::JensenShannon); }
Metric Metric::triangular() { return Metric(MetricKind::Triangular); }

Metric Metric::quadratic_form(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError("quadratic form: matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw DomainError("quadratic form: non-finite matrix entry");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("quadratic form: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw DomainError("quadratic form: matrix is not positive semi-definite");
  }
  Metric metric(MetricKind::QuadraticForm);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // x -> x * V diag(sqrt(lambda)) realises the form as plain l2 distance.
  metric.qf_root_ = std::make_shared<const Matrix>(eig.eigenvectors() * root.asDiagonal());
  metric.qf_ = std::make_shared<const Matrix>(std::move(m));
  return metric;
}

Metric Metric::from_name(std::string_view name) {
  if (name == "euclidean" || name == "l2") return euclidean();
  if (name == "cosine") return cosine();
  if (name == "jsd" || name == "jensen-shannon") return jensen_shannon();
  if (name == "triangular") return triangular();
  if (name == "quadratic-form" || name == "qf") {
    throw InvalidArgument("metric: quadratic-form requires a matrix");
  }
  throw InvalidArgument("metric: unknown name '" + std::string(name) + "'");
}

std::string_view Metric::name() const {
  switch (kind_) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::CosineL2Normed: return "cosine";
    case MetricKind::JensenShannon: return "jensen-shannon";
    case MetricKind::Triangular: return "triangular";
    case MetricKind::QuadraticForm: return "quadratic-form";
  }
  return "unknown";
}

double Metric::operator()(ConstSpan u, ConstSpan v) const {
  switch (kind_) {
    case MetricKind::Euclidean: return nsx::euclidean(u, v);
    case MetricKind::CosineL2Normed: return nsx::cosine_l2normed(u, v);
    case MetricKind::JensenShannon: return nsx::jensen_shannon(u, v);
    case MetricKind::Triangular: return nsx::triangular(u, v);
    case MetricKind::QuadraticForm: return nsx::quadratic_form(*qf_, u, v);
  }
  throw InternalError("metric: unknown kind");
}

void Metric::check_domain(ConstSpan v) const {
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("metric: non-finite component");
  }
  switch (kind_) {
    case MetricKind::JensenShannon:
    case MetricKind::Triangular:
      checked_probability_sum(v, kind_ == MetricKind::JensenShannon ? "jensen_shannon" : "triangular");
      break;
    case MetricKind::CosineL2Normed: {
      bool nonzero = false;
      for (double x : v) nonzero = nonzero || x != 0.0;
      if (!nonzero) throw DomainError("cosine: zero vector");
      break;
    }
    case MetricKind::QuadraticForm:
      if (static_cast<Index>(v.size()) != qf_->rows()) {
        throw DimensionMismatch("quadratic form: vector dimension does not match matrix");
      }
      break;
    case MetricKind::Euclidean: break;
  }
}

std::optional<RowMatrix> Metric::coordinates(const RowMatrix& rows) const {
  switch (kind_) {
    case MetricKind::Euclidean: return rows;
    case MetricKind::CosineL2Normed: {
      RowMatrix out = rows;
      for (Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n == 0.0) throw DomainError("cosine: zero vector");
        out.row(i) /= n;
      }
      return out;
    }
    case MetricKind::QuadraticForm: {
      if (rows.cols() != qf_root_->rows()) {
        throw DimensionMismatch("quadratic form: data dimension does not match matrix");
      }
      return RowMatrix(rows * (*qf_root_));
    }
    case MetricKind::JensenShannon:
    case MetricKind::Triangular: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace nsx
