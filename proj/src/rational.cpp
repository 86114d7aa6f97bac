#include "kgc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace kgc {

std::optional<Rat> rat_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  auto parse_int = [](const std::string& t) -> std::optional<Int> {
    if (t.empty()) return std::nullopt;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return std::nullopt;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return std::nullopt;
    return Int(t);
  };
  if (slash == std::string::npos) {
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rat(*n);
  }
  auto n = parse_int(s.substr(0, slash));
  auto d = parse_int(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rat(*n, *d);
}

std::string rat_str(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

Rat factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rat(f);
}

Rat binomial(int n, int k) {
  if (k < 0 || k > n) return Rat(0);
  Int num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  return Rat(num, den);
}

}  // namespace kgc

namespace kgc {

Rat pow_rat(const Rat& base, int e) {
  if (e < 0) throw std::invalid_argument("pow_rat: negative exponent");
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace kgc
