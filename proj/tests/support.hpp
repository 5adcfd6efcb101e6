#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "nsx/data.hpp"
#include "nsx/rng.hpp"
#include "nsx/types.hpp"

namespace testing {

inline nsx::Vector random_vector(nsx::Rng& rng, nsx::Index m) {
  nsx::Vector v(m);
  for (nsx::Index i = 0; i < m; ++i) v[i] = rng.uniform();
  return v;
}

inline nsx::Vector random_probability(nsx::Rng& rng, nsx::Index m) {
  nsx::Vector v = random_vector(rng, m);
  return v / v.sum();
}

inline nsx::RowMatrix random_probabilities(nsx::Index n, nsx::Index m, std::uint64_t seed) {
  return nsx::l1_normalize(nsx::gen_uniform(n, m, seed));
}

/// Random symmetric PSD matrix A^T A.
inline nsx::Matrix random_psd(nsx::Index m, std::uint64_t seed) {
  nsx::Rng rng(seed);
  nsx::Matrix a(m, m);
  for (nsx::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  nsx::Matrix s = a.transpose() * a;
  return 0.5 * (s + s.transpose());
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nsx-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing
