#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace nsx {

using Index = Eigen::Index;

/// Data sets are stored one object per row so that a row is a contiguous span.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ConstSpan = std::span<const double>;

inline ConstSpan row_span(const RowMatrix& m, Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline ConstSpan as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Object identifier inside a corpus (fits the ivecs on-disk layout).
using ObjectId = std::uint32_t;

}  // namespace nsx
