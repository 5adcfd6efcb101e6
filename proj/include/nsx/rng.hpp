#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nsx {

/// Seedable generator with a fully specified output sequence.
///
/// Bits come from std::mt19937_64, whose algorithm and output are fixed by the
/// C++ standard. The standard distributions are not portable across library
/// implementations, so every derived variate is computed here:
///   - uniform():  top 53 bits scaled by 2^-53, giving [0, 1)
///   - below(n):   rejection sampling on the top of the 64-bit range
///   - normal():   Marsaglia polar method
///   - split(s):   child seed = splitmix64(seed ^ splitmix64(s))
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  double uniform();
  std::uint64_t below(std::uint64_t n);
  double normal();

  /// `count` distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::size_t n, std::size_t count);

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic seed derivation from a master seed and a tuple of tags.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace nsx
