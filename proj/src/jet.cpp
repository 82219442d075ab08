#include "gl2ode/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace gl2ode {

namespace {

Sym subscript_symbol(char c) {
  switch (c) {
    case 'x': return Sym::X;
    case 'y': return Sym::Y;
    case '1': return Sym::Y1;
    case '2': return Sym::Y2;
    case '3': return Sym::Y3;
    default: throw std::invalid_argument(std::string("unknown derivative subscript '") + c + "'");
  }
}

// Canonical subscript order: digits ascending, then x, then y ("F33y", "F123").
std::string canonical(std::string_view subs) {
  std::string s(subs);
  auto rank = [](char c) { return c == 'x' ? 10 : c == 'y' ? 11 : c - '0'; };
  std::sort(s.begin(), s.end(), [&](char a, char b) { return rank(a) < rank(b); });
  return s;
}

}  // namespace

const Expr& JetDerivatives::partial_of(const std::string& subs) {
  const std::string key = "F" + subs;
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  Expr value;
  if (subs.empty()) {
    value = F_;
  } else {
    const Expr& prev = partial_of(subs.substr(0, subs.size() - 1));
    value = simplify(partial(prev, subscript_symbol(subs.back())));
  }
  return cache_.emplace(key, std::move(value)).first->second;
}

const Expr& JetDerivatives::get(std::string_view name) {
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  int totals = 0;
  std::string_view rest = name;
  if (!rest.empty() && rest.front() == 'D') {
    rest.remove_prefix(1);
    totals = 1;
    if (!rest.empty() && rest.front() >= '2' && rest.front() <= '9' && rest.size() > 1 && rest[1] == 'F') {
      totals = rest.front() - '0';
      rest.remove_prefix(1);
    }
  }
  if (rest.empty() || rest.front() != 'F') throw std::invalid_argument("malformed derivative name '" + std::string(name) + "'");
  rest.remove_prefix(1);
  for (char c : rest) subscript_symbol(c);  // validates
  const std::string subs = canonical(rest);
  const Expr* value = &partial_of(subs);
  std::string built = "F" + subs;
  for (int k = 1; k <= totals; ++k) {
    const std::string next = (k == 1 ? "D" : "D" + std::to_string(k)) + ("F" + subs);
    auto it = cache_.find(next);
    if (it == cache_.end()) it = cache_.emplace(next, simplify(total(*value))).first;
    value = &it->second;
    built = next;
  }
  if (built != name) cache_.emplace(std::string(name), *value);
  return *value;
}

}  // namespace gl2ode
