#include "gl2ode/sampling.hpp"

#include <charconv>
#include <stdexcept>

namespace gl2ode {

SampleBox SampleBox::jet() {
  SampleBox b;
  b.set(Sym::X, {-1, 1}).set(Sym::Y, {0.5, 2}).set(Sym::Y1, {-1, 1}).set(Sym::Y2, {0.5, 2}).set(Sym::Y3, {0.5, 2});
  return b;
}

SampleBox SampleBox::bundle() {
  SampleBox b = jet();
  b.set(Sym::A10, {-1, 1}).set(Sym::A11, {0.5, 2}).set(Sym::A44, {0.5, 2});
  return b;
}

SampleBox& SampleBox::set(Sym s, Interval r) {
  if (!(r.lo <= r.hi)) throw std::invalid_argument("empty sampling interval for " + std::string(symbol_name(s)));
  ranges_[s] = r;
  return *this;
}

SampleBox& SampleBox::set(std::string_view spec) {
  const auto eq = spec.find('=');
  const auto colon = spec.find(':', eq == std::string_view::npos ? 0 : eq);
  if (eq == std::string_view::npos || colon == std::string_view::npos)
    throw std::invalid_argument("box spec must look like name=lo:hi, got '" + std::string(spec) + "'");
  const auto sym = coordinate_from_name(spec.substr(0, eq));
  if (!sym) throw std::invalid_argument("unknown coordinate in box spec '" + std::string(spec) + "'");
  auto number = [&](std::string_view t) {
    double v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      throw std::invalid_argument("bad number in box spec '" + std::string(spec) + "'");
    return v;
  };
  return set(*sym, {number(spec.substr(eq + 1, colon - eq - 1)), number(spec.substr(colon + 1))});
}

double Sampler::uniform(double lo, double hi) {
  const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Binding Sampler::draw(const SampleBox& box) {
  Binding b;
  for (const auto& [s, r] : box.ranges()) b.set(s, uniform(r.lo, r.hi));
  return b;
}

std::vector<Binding> draw_samples(const SampleBox& box, std::size_t n, std::uint64_t seed) {
  Sampler s(seed);
  std::vector<Binding> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.draw(box));
  return out;
}

std::vector<std::pair<std::string, double>> describe(const Binding& b) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    const auto s = static_cast<Sym>(i);
    if (b.has(s)) out.emplace_back(std::string(symbol_name(s)), b.get(s));
  }
  return out;
}

}  // namespace gl2ode
