#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace pcc {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a; used to turn tags into seed material.
std::uint64_t hash_tag(std::string_view tag);

/// Derives an independent child seed from a parent seed and a path of
/// integers. Child streams for different paths are uncorrelated, so work can
/// be scheduled in any order without changing results.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Deterministic random stream.
///
/// mt19937_64 output is fixed by the standard, but the std distributions are
/// not, so every draw used by the library goes through the helpers here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  /// Uniform integer in [lo, hi].
  int between(int lo, int hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn proportionally to non-negative weights.
  std::size_t weighted(const std::vector<double>& weights);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcc
