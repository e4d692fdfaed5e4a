#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace poisonlab {

/// Mixes a base seed with a stream id into an independent seed.
///
/// Used to give each concern of a run (environment dynamics, poisoning
/// decisions, learner sampling, evaluation rollouts) its own stream, so
/// enabling one feature never shifts the random sequence consumed by
/// another.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seeded random stream with the small set of draws the library needs.
///
/// Distribution code is written out instead of using <random>'s
/// distribution templates, whose output is implementation-defined; this
/// keeps runs reproducible for a fixed seed regardless of the standard
/// library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Draws an index from a probability vector. Rounding slack in the
  /// cumulative scan falls into the last non-zero bucket.
  int categorical(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("categorical: empty distribution");
    const double x = uniform();
    double cum = 0.0;
    int last_nonzero = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] > 0.0) last_nonzero = static_cast<int>(i);
      cum += probs[i];
      if (x < cum) return static_cast<int>(i);
    }
    if (last_nonzero < 0) throw std::invalid_argument("categorical: all-zero distribution");
    return last_nonzero;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace poisonlab
