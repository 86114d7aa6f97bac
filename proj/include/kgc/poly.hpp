#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgc/rational.hpp"

namespace kgc {

// Exponent vector; all polynomials in a given expression share the same
// variable count.
using Mono = std::vector<int>;

template <class T>
struct Poly {
  int nvars = 0;
  std::map<Mono, T> terms;  // ordered keys keep every iteration deterministic

  Poly() = default;
  explicit Poly(int nv) : nvars(nv) {}

  static Poly constant(int nv, const T& c) {
    Poly p(nv);
    if (!(c == T{})) p.terms.emplace(Mono(nv, 0), c);
    return p;
  }
  static Poly variable(int nv, int i, const T& c) {
    Poly p(nv);
    if (!(c == T{})) {
      Mono m(nv, 0);
      m[i] = 1;
      p.terms.emplace(std::move(m), c);
    }
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const Mono& m, const T& c) {
    auto it = terms.find(m);
    if (it == terms.end()) {
      if (!(c == T{})) terms.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == T{}) terms.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms) add_term(m, T{} - c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_vars(b);
    Poly r(a.nvars);
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        Mono m(ma);
        for (int i = 0; i < r.nvars; ++i) m[i] += mb[i];
        r.add_term(m, ca * cb);
      }
    return r;
  }

  Poly scaled(const T& c) const {
    Poly r(nvars);
    if (c == T{}) return r;
    for (const auto& [m, v] : terms) r.terms.emplace(m, v * c);
    return r;
  }

  Poly derivative(int var) const {
    Poly r(nvars);
    for (const auto& [m, c] : terms) {
      if (m[var] == 0) continue;
      Mono d(m);
      d[var] -= 1;
      r.add_term(d, c * T(m[var]));
    }
    return r;
  }

  // substitute variable -> constant value
  Poly substituted(int var, const T& value) const {
    Poly r(nvars);
    for (const auto& [m, c] : terms) {
      T coef = c;
      for (int k = 0; k < m[var]; ++k) coef = coef * value;
      Mono d(m);
      d[var] = 0;
      r.add_term(d, coef);
    }
    return r;
  }

  T eval(const std::vector<T>& x) const {
    T acc{};
    for (const auto& [m, c] : terms) {
      T t = c;
      for (int i = 0; i < nvars; ++i)
        for (int k = 0; k < m[i]; ++k) t = t * x[i];
      acc += t;
    }
    return acc;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms) {
      int s = 0;
      for (int e : m) s += e;
      if (s > d) d = s;
    }
    return d;
  }

  bool operator==(const Poly& o) const {
    return nvars == o.nvars && terms == o.terms;
  }

 private:
  void check_vars(const Poly& o) const {
    if (nvars != o.nvars) throw std::invalid_argument("poly variable count mismatch");
  }
};

using PolyQ = Poly<Rat>;
using PolyD = Poly<double>;

// Formal series in the deformation parameter: eps degree -> coefficient poly.
template <class T>
struct EpsPoly {
  int nvars = 0;
  std::map<int, Poly<T>> parts;

  EpsPoly() = default;
  explicit EpsPoly(int nv) : nvars(nv) {}

  void add(int eps, const Poly<T>& p) {
    if (p.is_zero()) return;
    auto it = parts.find(eps);
    if (it == parts.end())
      parts.emplace(eps, p);
    else {
      it->second += p;
      if (it->second.is_zero()) parts.erase(it);
    }
  }

  Poly<T> at(int eps) const {
    auto it = parts.find(eps);
    return it == parts.end() ? Poly<T>(nvars) : it->second;
  }

  EpsPoly& operator+=(const EpsPoly& o) {
    for (const auto& [e, p] : o.parts) add(e, p);
    return *this;
  }
  EpsPoly& operator-=(const EpsPoly& o) {
    for (const auto& [e, p] : o.parts) add(e, Poly<T>(o.nvars) - p);
    return *this;
  }

  // product truncated at eps order <= cap
  EpsPoly truncated_product(const EpsPoly& o, int cap) const {
    EpsPoly r(nvars);
    for (const auto& [ea, pa] : parts)
      for (const auto& [eb, pb] : o.parts) {
        if (ea + eb > cap) continue;
        r.add(ea + eb, pa * pb);
      }
    return r;
  }

  bool is_zero() const { return parts.empty(); }

  bool operator==(const EpsPoly& o) const {
    return nvars == o.nvars && parts == o.parts;
  }
};

using EpsPolyQ = EpsPoly<Rat>;
using EpsPolyD = EpsPoly<double>;

std::string poly_str(const PolyQ& p, const std::vector<std::string>& names);
// "eps^k : coeff * a^i b^j" lines, one per eps degree
std::string eps_poly_str(const EpsPolyQ& p, const std::vector<std::string>& names);

// Inverse of the printers. parse_poly reads one expression like
// "1/4 * h^2 + x * y - 2"; parse_eps_poly reads one or more lines with an
// optional "eps^k :" prefix per line (missing prefix means eps^0).
// Both throw ParseError-style std::invalid_argument on malformed input.
PolyQ parse_poly(const std::string& text, const std::vector<std::string>& names);
EpsPolyQ parse_eps_poly(const std::string& text,
                        const std::vector<std::string>& names);

}  // namespace kgc
