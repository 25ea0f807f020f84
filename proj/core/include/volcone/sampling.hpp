#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "volcone/rational.hpp"

namespace volcone {

/// Axis-aligned box with rational corners.
struct Box {
  RationalVector lo;
  RationalVector hi;

  std::size_t dimension() const noexcept { return lo.size(); }
  bool contains(const RationalVector& p) const;
  std::vector<RationalVector> corners() const;
  std::string describe() const;
};

/// Deterministic sampler producing exact dyadic rationals. The stream
/// depends only on the seed (mt19937_64 is fully specified), so probe
/// reports are reproducible across platforms.
class Sampler {
 public:
  static constexpr int kBits = 20;

  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// k / 2^kBits with k uniform in [0, 2^kBits].
  Rational unit();
  Rational uniform(const Rational& lo, const Rational& hi);
  RationalVector point(const Box& box);
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers. The body must
/// write only to slot i of its output, so results do not depend on the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

unsigned default_threads();

}  // namespace volcone
