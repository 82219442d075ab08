#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gl2ode/expr.hpp"

namespace gl2ode {

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Per-coordinate sampling ranges.
class SampleBox {
 public:
  /// x, y1 in [-1, 1]; y, y2, y3 in [0.5, 2].
  static SampleBox jet();
  /// jet() plus a10 in [-1, 1] and a11, a44 in [0.5, 2].
  static SampleBox bundle();

  SampleBox& set(Sym s, Interval r);
  /// "name=lo:hi", e.g. "y3=0.5:2".
  SampleBox& set(std::string_view spec);
  const std::map<Sym, Interval>& ranges() const { return ranges_; }

 private:
  std::map<Sym, Interval> ranges_;
};

/// mt19937_64 with uniforms taken from the top 53 bits, so draws are
/// identical on every platform for a given seed.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi);
  Binding draw(const SampleBox& box);

 private:
  std::mt19937_64 gen_;
};

std::vector<Binding> draw_samples(const SampleBox& box, std::size_t n, std::uint64_t seed);

/// The bound symbols of a binding, by name, in symbol order.
std::vector<std::pair<std::string, double>> describe(const Binding& b);

}  // namespace gl2ode
