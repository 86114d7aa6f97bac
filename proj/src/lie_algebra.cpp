#include "kgc/lie_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kgc {

namespace {

void vec_add(SparseVec& v, int k, const Rat& c) {
  auto it = v.find(k);
  if (it == v.end()) {
    if (c != 0) v.emplace(k, c);
  } else {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

}  // namespace

SparseVec LieAlgebra::bracket_basis(int i, int j) const {
  if (i == j) return {};
  bool flip = i > j;
  if (flip) std::swap(i, j);
  auto it = structure.find({i, j});
  if (it == structure.end()) return {};
  if (!flip) return it->second;
  SparseVec r;
  for (const auto& [k, c] : it->second) r.emplace(k, -c);
  return r;
}

SparseVec LieAlgebra::bracket_vec(const SparseVec& u, const SparseVec& v) const {
  SparseVec r;
  for (const auto& [i, ci] : u)
    for (const auto& [j, cj] : v)
      for (const auto& [k, c] : bracket_basis(i, j)) vec_add(r, k, ci * cj * c);
  return r;
}

int LieAlgebra::index_of(const std::string& name) const {
  for (int i = 0; i < dim; ++i)
    if (names[i] == name) return i;
  return -1;
}

void LieAlgebra::set_bracket(int i, int j, SparseVec c) {
  if (i == j) throw std::invalid_argument("set_bracket: equal indices");
  if (i > j) {
    std::swap(i, j);
    for (auto& [k, v] : c) v = -v;
  }
  // drop zero entries
  for (auto it = c.begin(); it != c.end();)
    it = (it->second == 0) ? c.erase(it) : std::next(it);
  if (c.empty())
    structure.erase({i, j});
  else
    structure[{i, j}] = std::move(c);
}

void check_jacobi(const LieAlgebra& L) {
  for (int i = 0; i < L.dim; ++i)
    for (int j = i + 1; j < L.dim; ++j)
      for (int k = j + 1; k < L.dim; ++k) {
        SparseVec total;
        auto term = [&](int a, int b, int c) {
          SparseVec inner = L.bracket_basis(b, c);
          for (const auto& [m, cm] : inner)
            for (const auto& [r, cr] : L.bracket_basis(a, m)) vec_add(total, r, cm * cr);
        };
        term(i, j, k);
        term(j, k, i);
        term(k, i, j);
        if (!total.empty()) {
          std::ostringstream os;
          os << "Jacobi identity fails on (" << L.names[i] << "," << L.names[j] << ","
             << L.names[k] << ")";
          throw std::runtime_error(os.str());
        }
      }
}

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

LieAlgebra parse_algebra(const std::string& text) {
  LieAlgebra L;
  bool have_dim = false, have_basis = false;
  int stmt_no = 0;
  for (const std::string& raw : split(text, ';')) {
    ++stmt_no;
    std::string stmt = strip(raw);
    if (stmt.empty() || stmt[0] == '#') continue;
    if (stmt.rfind("dim=", 0) == 0) {
      try {
        L.dim = std::stoi(strip(stmt.substr(4)));
      } catch (...) {
        throw ParseError(stmt_no, 0, "bad dim value '" + stmt.substr(4) + "'");
      }
      if (L.dim <= 0) throw ParseError(stmt_no, 0, "dim must be positive");
      have_dim = true;
    } else if (stmt.rfind("basis=", 0) == 0) {
      for (auto& name : split(stmt.substr(6), ',')) {
        std::string n = strip(name);
        if (n.empty()) throw ParseError(stmt_no, 0, "empty basis name");
        L.names.push_back(n);
      }
      have_basis = true;
    } else if (stmt.rfind("bracket ", 0) == 0) {
      if (!have_dim || !have_basis)
        throw ParseError(stmt_no, 0, "bracket before dim/basis");
      if (static_cast<int>(L.names.size()) != L.dim)
        throw ParseError(stmt_no, 0, "basis size does not match dim");
      size_t eq = stmt.find('=');
      if (eq == std::string::npos) throw ParseError(stmt_no, 0, "bracket line without '='");
      std::istringstream head(stmt.substr(8, eq - 8));
      std::string a, b;
      head >> a >> b;
      int i = L.index_of(a), j = L.index_of(b);
      if (i < 0) throw ParseError(stmt_no, 0, "unknown basis name '" + a + "'");
      if (j < 0) throw ParseError(stmt_no, 0, "unknown basis name '" + b + "'");
      if (i == j) throw ParseError(stmt_no, 0, "bracket of a name with itself");
      SparseVec c;
      std::string rhs = strip(stmt.substr(eq + 1));
      if (rhs != "0") {
        for (auto& termtext : split(rhs, '+')) {
          std::string term = strip(termtext);
          size_t star = term.find('*');
          if (star == std::string::npos)
            throw ParseError(stmt_no, 0, "term '" + term + "' missing coeff*name");
          auto coef = rat_parse(strip(term.substr(0, star)));
          if (!coef)
            throw ParseError(stmt_no, 0, "bad coefficient '" + term.substr(0, star) + "'");
          std::string name = strip(term.substr(star + 1));
          int k = L.index_of(name);
          if (k < 0) throw ParseError(stmt_no, 0, "unknown basis name '" + name + "'");
          vec_add(c, k, *coef);
        }
      }
      L.set_bracket(i, j, std::move(c));
    } else {
      throw ParseError(stmt_no, 0, "unrecognized statement '" + stmt + "'");
    }
  }
  if (!have_dim) throw ParseError(0, 0, "missing dim");
  if (!have_basis) throw ParseError(0, 0, "missing basis");
  if (static_cast<int>(L.names.size()) != L.dim)
    throw ParseError(0, 0, "basis size does not match dim");
  check_jacobi(L);
  return L;
}

std::string serialize_algebra(const LieAlgebra& L) {
  std::ostringstream os;
  os << "dim=" << L.dim << "; basis=";
  for (int i = 0; i < L.dim; ++i) os << (i ? "," : "") << L.names[i];
  for (const auto& [ij, c] : L.structure) {
    os << "; bracket " << L.names[ij.first] << " " << L.names[ij.second] << " = ";
    bool first = true;
    for (const auto& [k, v] : c) {
      if (!first) os << " + ";
      os << rat_str(v) << "*" << L.names[k];
      first = false;
    }
  }
  os << ";";
  return os.str();
}

LieAlgebra abelian(int d) {
  LieAlgebra L;
  L.dim = d;
  for (int i = 0; i < d; ++i) L.names.push_back("e" + std::to_string(i + 1));
  return L;
}

LieAlgebra heisenberg3() {
  LieAlgebra L;
  L.dim = 3;
  L.names = {"X", "Y", "Z"};
  L.set_bracket(0, 1, {{2, 1}});
  return L;
}

LieAlgebra sl2() {
  LieAlgebra L;
  L.dim = 3;
  L.names = {"H", "X", "Y"};
  L.set_bracket(0, 1, {{1, 2}});   // [H,X] = 2X
  L.set_bracket(0, 2, {{2, -2}});  // [H,Y] = -2Y
  L.set_bracket(1, 2, {{0, 1}});   // [X,Y] = H
  return L;
}

LieAlgebra solvable4() {
  LieAlgebra L;
  L.dim = 4;
  L.names = {"T", "X", "Y", "Z"};
  L.set_bracket(0, 1, {{1, 1}});
  L.set_bracket(0, 2, {{2, 1}});
  L.set_bracket(0, 3, {{3, 2}});
  return L;
}

LieAlgebra aff1() {
  LieAlgebra L;
  L.dim = 2;
  L.names = {"T", "X"};
  L.set_bracket(0, 1, {{1, 1}});
  return L;
}

LieAlgebra double_algebra(const LieAlgebra& g) {
  LieAlgebra L;
  L.dim = 2 * g.dim;
  for (const auto& n : g.names) L.names.push_back(n + ".1");
  for (const auto& n : g.names) L.names.push_back(n + ".2");
  for (const auto& [ij, c] : g.structure) {
    SparseVec c1, c2;
    for (const auto& [k, v] : c) {
      c1.emplace(k, v);
      c2.emplace(k + g.dim, v);
    }
    L.set_bracket(ij.first, ij.second, c1);
    L.set_bracket(ij.first + g.dim, ij.second + g.dim, c2);
  }
  return L;
}

std::optional<LieAlgebra> algebra_preset(const std::string& name) {
  if (name == "heisenberg3") return heisenberg3();
  if (name == "sl2") return sl2();
  if (name == "solvable4") return solvable4();
  if (name == "aff1") return aff1();
  if (name.rfind("abelian", 0) == 0) {
    try {
      int d = std::stoi(name.substr(7));
      if (d >= 1 && d <= 64) return abelian(d);
    } catch (...) {
    }
    return std::nullopt;
  }
  if (name.rfind("double-", 0) == 0) {
    auto base = algebra_preset(name.substr(7));
    if (base) return double_algebra(*base);
    return std::nullopt;
  }
  return std::nullopt;
}

MatQ ad_matrix(const LieAlgebra& L, const SparseVec& u) {
  MatQ m(L.dim, std::vector<Rat>(L.dim, Rat(0)));
  for (int j = 0; j < L.dim; ++j)
    for (const auto& [i, ci] : u)
      for (const auto& [k, c] : L.bracket_basis(i, j)) m[k][j] += ci * c;
  return m;
}

Rat trace(const MatQ& m) {
  Rat t = 0;
  for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

MatQ mat_mul(const MatQ& a, const MatQ& b) {
  size_t n = a.size();
  MatQ r(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < n; ++j)
        if (b[k][j] != 0) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

MatPoly ad_generic(const LieAlgebra& L, int nvars, int offset) {
  MatPoly m(L.dim, std::vector<PolyQ>(L.dim, PolyQ::constant(nvars, 0)));
  for (int i = 0; i < L.dim; ++i) {
    PolyQ xi = PolyQ::variable(nvars, offset + i, 1);
    for (int j = 0; j < L.dim; ++j)
      for (const auto& [k, c] : L.bracket_basis(i, j)) m[k][j] += xi.scaled(c);
  }
  return m;
}

PolyQ trace(const MatPoly& m) {
  PolyQ t = PolyQ::constant(m.empty() ? 0 : m[0][0].nvars, 0);
  for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

MatPoly mat_mul(const MatPoly& a, const MatPoly& b) {
  size_t n = a.size();
  int nv = n ? a[0][0].nvars : 0;
  MatPoly r(n, std::vector<PolyQ>(n, PolyQ::constant(nv, 0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k].terms.empty()) continue;
      for (size_t j = 0; j < n; ++j)
        if (!b[k][j].terms.empty()) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

}  // namespace kgc
