#include "kgc/subalgebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kgc {

namespace {

bool in_span(const SparseVec& v, const std::vector<int>& indices) {
  for (const auto& [k, c] : v)
    if (c != Rat(0) && std::find(indices.begin(), indices.end(), k) == indices.end())
      return false;
  return true;
}

}  // namespace

int SubalgebraData::h_slot(int parent_index) const {
  for (int s = 0; s < hdim(); ++s)
    if (h_basis[s] == parent_index) return s;
  return -1;
}

int SubalgebraData::q_slot(int parent_index) const {
  for (int s = 0; s < qdim(); ++s)
    if (q_basis[s] == parent_index) return s;
  return -1;
}

Rat SubalgebraData::lambda_value(int parent_index) const {
  if (h_slot(parent_index) < 0)
    throw std::invalid_argument("lambda_value: index " +
                                std::to_string(parent_index) + " is not in h");
  auto it = lambda.find(parent_index);
  return it == lambda.end() ? Rat(0) : it->second;
}

PolyQ SubalgebraData::chart_linear(const SparseVec& v) const {
  PolyQ r(qdim());
  for (const auto& [k, c] : v) {
    if (c == Rat(0)) continue;
    int qs = q_slot(k);
    if (qs >= 0)
      r += PolyQ::variable(qdim(), qs, c);
    else
      r += PolyQ::constant(qdim(), lambda_value(k) * c);
  }
  return r;
}

SubalgebraData make_subalgebra(LieAlgebra parent, std::vector<int> h,
                               std::map<int, Rat> lambda) {
  SubalgebraData s;
  const int d = parent.dim;

  std::set<int> hset;
  for (int i : h) {
    if (i < 0 || i >= d)
      throw std::invalid_argument("subalgebra index " + std::to_string(i) +
                                  " outside the basis");
    if (!hset.insert(i).second)
      throw std::invalid_argument("subalgebra index " + std::to_string(i) +
                                  " repeated");
  }
  std::sort(h.begin(), h.end());
  s.h_basis = h;
  for (int i = 0; i < d; ++i)
    if (!hset.count(i)) s.q_basis.push_back(i);

  for (const auto& [k, v] : lambda) {
    if (!hset.count(k))
      throw std::invalid_argument("character value on index " +
                                  std::to_string(k) + " which is not in h");
    (void)v;
  }
  s.lambda = std::move(lambda);

  // h closed under bracket, lambda a character on it
  for (size_t a = 0; a < h.size(); ++a)
    for (size_t b = a + 1; b < h.size(); ++b) {
      SparseVec br = parent.bracket_basis(h[a], h[b]);
      if (!in_span(br, s.h_basis))
        throw std::invalid_argument(
            "h is not closed: [" + parent.names[h[a]] + ", " +
            parent.names[h[b]] + "] leaves the span");
      Rat lv = 0;
      for (const auto& [k, c] : br) {
        auto it = s.lambda.find(k);
        if (it != s.lambda.end()) lv += c * it->second;
      }
      if (lv != Rat(0))
        throw std::invalid_argument(
            "lambda does not vanish on [" + parent.names[h[a]] + ", " +
            parent.names[h[b]] + "]");
    }

  s.h_stable_complement = true;
  for (int a : s.h_basis)
    for (int b : s.q_basis)
      if (!in_span(parent.bracket_basis(a, b), s.q_basis))
        s.h_stable_complement = false;
  s.symmetric_pair = s.h_stable_complement;
  for (size_t a = 0; a < s.q_basis.size() && s.symmetric_pair; ++a)
    for (size_t b = a + 1; b < s.q_basis.size(); ++b)
      if (!in_span(parent.bracket_basis(s.q_basis[a], s.q_basis[b]), s.h_basis)) {
        s.symmetric_pair = false;
        break;
      }

  s.parent = std::move(parent);
  return s;
}

namespace {

// splits off trailing "key=...;" clauses understood here; the rest of the
// text is algebra grammar
struct Clauses {
  std::string algebra;
  std::optional<std::string> h, lambda, flags;
};

Clauses split_clauses(const std::string& text) {
  Clauses c;
  std::string rest;
  // statements are ';'-separated, as in the algebra grammar
  std::string acc;
  for (char ch : text) {
    if (ch == ';') {
      std::string t = acc;
      acc.clear();
      size_t b = t.find_first_not_of(" \t\r\n");
      std::string key = b == std::string::npos ? "" : t.substr(b);
      auto starts = [&](const char* k) {
        return key.rfind(k, 0) == 0;
      };
      if (starts("h=")) c.h = key.substr(2);
      else if (starts("q=")) /* recomputed; accepted and ignored */;
      else if (starts("lambda=")) c.lambda = key.substr(7);
      else if (starts("flags=")) c.flags = key.substr(6);
      else rest += t + ";";
    } else {
      acc += ch;
    }
  }
  rest += acc;
  c.algebra = rest;
  return c;
}

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> r;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    size_t b = tok.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    size_t e = tok.find_last_not_of(" \t\r\n");
    r.push_back(std::stoi(tok.substr(b, e - b + 1)));
  }
  return r;
}

}  // namespace

SubalgebraData parse_subalgebra(const std::string& text) {
  Clauses c = split_clauses(text);
  LieAlgebra parent = parse_algebra(c.algebra);

  std::vector<int> h;
  if (c.h) h = parse_index_list(*c.h);

  std::map<int, Rat> lambda;
  if (c.lambda) {
    std::istringstream in(*c.lambda);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      size_t b = tok.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) continue;
      size_t colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("lambda clause needs index:value pairs");
      int idx = std::stoi(tok.substr(b, colon - b));
      auto v = rat_parse(tok.substr(colon + 1));
      if (!v) throw std::invalid_argument("bad rational in lambda clause");
      lambda[idx] = *v;
    }
  }

  SubalgebraData s = make_subalgebra(std::move(parent), std::move(h),
                                     std::move(lambda));
  if (c.flags) {
    std::set<std::string> given;
    std::istringstream in(*c.flags);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      size_t b = tok.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) continue;
      size_t e = tok.find_last_not_of(" \t\r\n");
      given.insert(tok.substr(b, e - b + 1));
    }
    if (given.count("h_stable_complement") != (s.h_stable_complement ? 1u : 0u) ||
        given.count("symmetric_pair") != (s.symmetric_pair ? 1u : 0u))
      throw std::invalid_argument(
          "flags clause disagrees with the structure constants");
  }
  return s;
}

std::string serialize_subalgebra(const SubalgebraData& s) {
  std::ostringstream out;
  out << serialize_algebra(s.parent);
  out << "h=";
  for (int i = 0; i < s.hdim(); ++i)
    out << (i ? "," : "") << s.h_basis[i];
  out << ";\nq=";
  for (int i = 0; i < s.qdim(); ++i)
    out << (i ? "," : "") << s.q_basis[i];
  out << ";\n";
  bool any = false;
  for (const auto& [k, v] : s.lambda)
    if (v != Rat(0)) {
      out << (any ? "," : "lambda=") << k << ":" << rat_str(v);
      any = true;
    }
  if (any) out << ";\n";
  if (s.h_stable_complement || s.symmetric_pair) {
    out << "flags=";
    if (s.h_stable_complement) out << "h_stable_complement";
    if (s.symmetric_pair) out << ",symmetric_pair";
    out << ";\n";
  }
  return out.str();
}

LieAlgebra double_kp_algebra(const LieAlgebra& g) {
  const int d = g.dim;
  LieAlgebra D;
  D.dim = 2 * d;
  for (int i = 0; i < d; ++i) D.names.push_back("K." + g.names[i]);
  for (int i = 0; i < d; ++i) D.names.push_back("P." + g.names[i]);
  auto shifted = [&](const SparseVec& c, int off) {
    SparseVec r;
    for (const auto& [k, v] : c) r[k + off] = v;
    return r;
  };
  for (const auto& [ij, c] : g.structure) {
    auto [i, j] = ij;
    if (c.empty()) continue;
    D.set_bracket(i, j, shifted(c, 0));          // [K_i, K_j] = c K
    D.set_bracket(d + i, d + j, shifted(c, 0));  // [P_i, P_j] = c K
  }
  // [K_i, P_j] = c_ij^k P_k for every ordered pair
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      SparseVec c = g.bracket_basis(i, j);
      if (!c.empty()) D.set_bracket(i, d + j, shifted(c, d));
    }
  return D;
}

LieAlgebra double_kg_algebra(const LieAlgebra& g) {
  const int d = g.dim;
  LieAlgebra D;
  D.dim = 2 * d;
  for (int i = 0; i < d; ++i) D.names.push_back("K." + g.names[i]);
  for (int i = 0; i < d; ++i) D.names.push_back("G." + g.names[i]);
  auto shifted = [&](const SparseVec& c, int off, Rat scale) {
    SparseVec r;
    for (const auto& [k, v] : c) r[k + off] = v * scale;
    return r;
  };
  for (const auto& [ij, c] : g.structure) {
    auto [i, j] = ij;
    if (c.empty()) continue;
    D.set_bracket(i, j, shifted(c, 0, 1));          // [K_i, K_j] = c K
    D.set_bracket(d + i, d + j, shifted(c, d, 2));  // [G_i, G_j] = 2 c G
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      SparseVec c = g.bracket_basis(i, j);
      if (!c.empty()) D.set_bracket(i, d + j, shifted(c, d, 1));  // c G
    }
  return D;
}

std::optional<SubalgebraData> subalgebra_preset(const std::string& name) {
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (starts("trivial-")) {
    auto g = algebra_preset(name.substr(8));
    if (!g) return std::nullopt;
    return make_subalgebra(*g, {});
  }
  if (name == "heis-z")
    return make_subalgebra(heisenberg3(), {2}, {{2, Rat(1)}});
  if (name == "heis-z0") return make_subalgebra(heisenberg3(), {2});
  if (name == "heis-polarization")
    // b = <Y, Z> is a polarization at any f with f(Z) = 1
    return make_subalgebra(heisenberg3(), {1, 2}, {{2, Rat(1)}});
  if (name == "sl2-cartan") {
    // sl2 in the basis K = X - Y, A = H, B = X + Y:
    // [K,A] = -2B, [K,B] = 2A, [A,B] = 2K; k = <K> compact, p = <A, B>
    LieAlgebra L;
    L.dim = 3;
    L.names = {"K", "A", "B"};
    L.set_bracket(0, 1, {{2, Rat(-2)}});
    L.set_bracket(0, 2, {{1, Rat(2)}});
    L.set_bracket(1, 2, {{0, Rat(2)}});
    check_jacobi(L);
    return make_subalgebra(L, {0});
  }
  if (name == "sl2-borel")
    // h = <H, X> the Borel; [h,h] = <X> forces lambda(X) = 0, lambda(H) free
    return make_subalgebra(sl2(), {0, 1}, {{0, Rat(1)}});
  if (name == "sl2-iwasawa")
    // k + a + n with k = so(2), a = <H>, n = <X>; the subalgebra is
    // m + n = <X> (m trivial here), the chart carries S(a) directions
    return make_subalgebra(sl2(), {1});
  if (starts("double-plus-")) {
    auto g = algebra_preset(name.substr(12));
    if (!g) return std::nullopt;
    LieAlgebra D = double_kg_algebra(*g);
    check_jacobi(D);
    std::vector<int> h(g->dim);
    for (int i = 0; i < g->dim; ++i) h[i] = i;
    return make_subalgebra(D, h);
  }
  if (starts("double-")) {
    auto g = algebra_preset(name.substr(7));
    if (!g) return std::nullopt;
    LieAlgebra D = double_kp_algebra(*g);
    check_jacobi(D);
    std::vector<int> h(g->dim);
    for (int i = 0; i < g->dim; ++i) h[i] = i;
    return make_subalgebra(D, h);
  }
  return std::nullopt;
}

}  // namespace kgc
