#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>

#include "nsx/baselines.hpp"
#include "nsx/metrics.hpp"
#include "nsx/simplex.hpp"

namespace nsx {

/// A linear transform together with the metric whose explicit coordinates
/// (Metric::coordinates) it consumes.
struct LinearReducer {
  Metric metric;
  LinearTransform transform;
};

using StoredTransform = std::variant<NSimplexTransform, LinearReducer, LmdsTransform>;

inline constexpr std::uint32_t kFormatVersion = 1;

/// Binary container; layout documented in docs/FORMATS.md.
void save_transform(const std::filesystem::path& path, const StoredTransform& t);
/// Throws FormatError on a bad magic, unknown version or kind, truncation or
/// inconsistent sizes.
StoredTransform load_transform(const std::filesystem::path& path);

/// Maps each row of `objects` with whichever transform is stored.
RowMatrix apply_transform(const StoredTransform& t, const RowMatrix& objects);
Index output_dimension(const StoredTransform& t);
Index input_dimension(const StoredTransform& t);

}  // namespace nsx
