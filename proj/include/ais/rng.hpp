#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace ais {

/// Mixes a root seed with a component tag so that each stochastic component
/// draws from its own stream. Changing how many numbers one component consumes
/// never shifts the draws seen by another.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag);

/// Seeded random source with platform-independent conversions.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard); the std:: distributions are not, so the conversions to
/// uniform reals, bounded integers and normals are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer on [0, n). Requires n >= 1.
  std::size_t below(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ais
