#include "kgc/poly.hpp"

#include <cctype>
#include <sstream>

namespace kgc {

std::string poly_str(const PolyQ& p, const std::vector<std::string>& names) {
  if (p.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (int i = 0; i < p.nvars; ++i) {
      if (m[i] == 0) continue;
      os << " * " << names[i];
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

std::string eps_poly_str(const EpsPolyQ& p, const std::vector<std::string>& names) {
  std::ostringstream os;
  if (p.parts.empty()) {
    os << "eps^0 : 0\n";
    return os.str();
  }
  for (const auto& [e, q] : p.parts)
    os << "eps^" << e << " : " << poly_str(q, names) << "\n";
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() &&
           (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r'))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(pos) + ": " + what);
  }
};

// unsigned rational or integer
Rat parse_number(Cursor& c) {
  c.skip_ws();
  size_t start = c.pos;
  while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
    ++c.pos;
  if (c.pos == start) c.fail("expected a number");
  std::string num = c.s.substr(start, c.pos - start);
  if (c.pos < c.s.size() && c.s[c.pos] == '/') {
    ++c.pos;
    size_t ds = c.pos;
    while (c.pos < c.s.size() &&
           std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
      ++c.pos;
    if (c.pos == ds) c.fail("expected a denominator");
    num += "/" + c.s.substr(ds, c.pos - ds);
  }
  auto r = rat_parse(num);
  if (!r) c.fail("bad rational '" + num + "'");
  return *r;
}

int parse_name(Cursor& c, const std::vector<std::string>& names) {
  c.skip_ws();
  size_t start = c.pos;
  while (c.pos < c.s.size() &&
         (std::isalnum(static_cast<unsigned char>(c.s[c.pos])) ||
          c.s[c.pos] == '_' || c.s[c.pos] == '.'))
    ++c.pos;
  std::string name = c.s.substr(start, c.pos - start);
  if (name.empty()) c.fail("expected a variable name");
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  c.fail("unknown variable '" + name + "'");
}

// term := [sign] (number | factor) ('*'? factor)*, factor := name ['^' int]
void parse_term(Cursor& c, const std::vector<std::string>& names, Rat sign,
                PolyQ& out) {
  Rat coef = sign;
  Mono mono(static_cast<int>(names.size()), 0);
  bool saw_anything = false;

  c.skip_ws();
  if (c.pos < c.s.size() &&
      std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
    coef *= parse_number(c);
    saw_anything = true;
  }
  while (true) {
    c.skip_ws();
    if (c.pos >= c.s.size() || c.s[c.pos] == '+' || c.s[c.pos] == '-') break;
    (void)c.eat('*');
    int var = parse_name(c, names);
    int exp = 1;
    if (c.eat('^')) {
      Rat e = parse_number(c);
      if (boost::multiprecision::denominator(e) != 1 || e < 0 || e > 64)
        c.fail("bad exponent");
      exp = static_cast<int>(boost::multiprecision::numerator(e));
    }
    mono[var] += exp;
    saw_anything = true;
  }
  if (!saw_anything) c.fail("empty term");
  out.add_term(mono, coef);
}

PolyQ parse_poly_expr(Cursor& c, const std::vector<std::string>& names) {
  PolyQ out(static_cast<int>(names.size()));
  bool first = true;
  while (!c.eof()) {
    Rat sign = 1;
    if (c.eat('-'))
      sign = -1;
    else if (!c.eat('+') && !first)
      c.fail("expected '+' or '-' between terms");
    parse_term(c, names, sign, out);
    first = false;
  }
  if (first) c.fail("empty polynomial");
  return out;
}

}  // namespace

PolyQ parse_poly(const std::string& text, const std::vector<std::string>& names) {
  Cursor c{text};
  return parse_poly_expr(c, names);
}

EpsPolyQ parse_eps_poly(const std::string& text,
                        const std::vector<std::string>& names) {
  EpsPolyQ out(static_cast<int>(names.size()));
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t ns = line.find_first_not_of(" \t\r");
    if (ns == std::string::npos || line[ns] == '#') continue;
    line = line.substr(ns);
    int eps = 0;
    if (line.rfind("eps^", 0) == 0) {
      size_t colon = line.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("missing ':' after eps power");
      eps = std::stoi(line.substr(4, colon - 4));
      line = line.substr(colon + 1);
    }
    Cursor c{line};
    out.add(eps, parse_poly_expr(c, names));  // "0" parses to the empty poly
  }
  return out;
}

}  // namespace kgc
