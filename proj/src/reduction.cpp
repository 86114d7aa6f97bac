#include "kgc/reduction.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace kgc {

namespace {

int bits_below(std::uint64_t mask, int gen) {
  return std::popcount(mask & ((std::uint64_t(1) << gen) - 1));
}

// sign of merging two ascending words: count the crossings
int interleave_sign(std::uint64_t a, std::uint64_t b) {
  int inv = 0;
  for (int g = 0; g + 1 < 64; ++g)
    if (b >> g & 1) inv += std::popcount(a >> (g + 1));
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace

ExtPoly ExtPoly::scalar(int ng, PolyQ p) {
  ExtPoly r(p.nvars, ng);
  if (!p.is_zero()) r.terms.emplace(0, std::move(p));
  return r;
}

int ExtPoly::ext_degree() const {
  int d = 0;
  for (const auto& [m, p] : terms)
    if (!p.is_zero()) d = std::max(d, std::popcount(m));
  return d;
}

void ExtPoly::add_term(std::uint64_t mask, const PolyQ& p) {
  if (p.is_zero()) return;
  auto it = terms.find(mask);
  if (it == terms.end()) {
    terms.emplace(mask, p);
  } else {
    it->second += p;
    if (it->second.is_zero()) terms.erase(it);
  }
}

ExtPoly& ExtPoly::operator+=(const ExtPoly& o) {
  for (const auto& [m, p] : o.terms) add_term(m, p);
  return *this;
}

ExtPoly& ExtPoly::operator-=(const ExtPoly& o) {
  for (const auto& [m, p] : o.terms) add_term(m, p.scaled(Rat(-1)));
  return *this;
}

ExtPoly ExtPoly::scaled(const Rat& c) const {
  ExtPoly r(nvars, ngen);
  if (c == Rat(0)) return r;
  for (const auto& [m, p] : terms) r.terms.emplace(m, p.scaled(c));
  return r;
}

ExtPoly ExtPoly::wedge(const ExtPoly& o) const {
  ExtPoly r(nvars, ngen);
  for (const auto& [ma, pa] : terms)
    for (const auto& [mb, pb] : o.terms) {
      if (ma & mb) continue;
      int s = interleave_sign(ma, mb);
      r.add_term(ma | mb, s > 0 ? pa * pb : (pa * pb).scaled(Rat(-1)));
    }
  return r;
}

ExtPoly ExtPoly::theta(int gen) const {
  ExtPoly r(nvars, ngen);
  const std::uint64_t bit = std::uint64_t(1) << gen;
  for (const auto& [m, p] : terms) {
    if (m & bit) continue;
    int s = bits_below(m, gen) % 2 == 0 ? 1 : -1;
    r.add_term(m | bit, s > 0 ? p : p.scaled(Rat(-1)));
  }
  return r;
}

ExtPoly ExtPoly::iota(int gen) const {
  ExtPoly r(nvars, ngen);
  const std::uint64_t bit = std::uint64_t(1) << gen;
  for (const auto& [m, p] : terms) {
    if (!(m & bit)) continue;
    int s = bits_below(m, gen) % 2 == 0 ? 1 : -1;
    r.add_term(m & ~bit, s > 0 ? p : p.scaled(Rat(-1)));
  }
  return r;
}

ExtPoly ExtPoly::poly_scaled(const PolyQ& p) const {
  ExtPoly r(nvars, ngen);
  for (const auto& [m, q] : terms) r.add_term(m, q * p);
  return r;
}

ReductionElement ReductionElement::scalar(const SubalgebraData& sub, PolyQ p) {
  ReductionElement r(sub.qdim(), sub.hdim());
  if (!p.is_zero()) r.parts.emplace(0, ExtPoly::scalar(sub.hdim(), std::move(p)));
  return r;
}

void ReductionElement::add(int eps, const ExtPoly& p) {
  if (p.is_zero()) return;
  auto it = parts.find(eps);
  if (it == parts.end()) {
    parts.emplace(eps, p);
  } else {
    it->second += p;
    if (it->second.is_zero()) parts.erase(it);
  }
}

ExtPoly ReductionElement::at(int eps) const {
  auto it = parts.find(eps);
  return it == parts.end() ? ExtPoly(nvars, ngen) : it->second;
}

bool ReductionElement::is_zero() const {
  for (const auto& [e, p] : parts)
    if (!p.is_zero()) return false;
  return true;
}

ReductionElement& ReductionElement::operator+=(const ReductionElement& o) {
  for (const auto& [e, p] : o.parts) add(e, p);
  return *this;
}

ReductionElement& ReductionElement::operator-=(const ReductionElement& o) {
  for (const auto& [e, p] : o.parts) add(e, p.scaled(Rat(-1)));
  return *this;
}

bool ReductionElement::operator==(const ReductionElement& o) const {
  ReductionElement d = *this;
  d -= o;
  return d.is_zero();
}

std::string print_reduction_element(const ReductionElement& r,
                                    const SubalgebraData& sub) {
  std::vector<std::string> qnames;
  for (int i : sub.q_basis) qnames.push_back(sub.parent.names[i]);
  std::ostringstream out;
  bool any = false;
  for (const auto& [eps, part] : r.parts)
    for (const auto& [mask, p] : part.terms) {
      if (p.is_zero()) continue;
      if (any) out << "\n";
      any = true;
      out << "eps^" << eps << " : " << poly_str(p, qnames) << " (x) ";
      if (mask == 0) {
        out << "1";
      } else {
        bool first = true;
        for (int g = 0; g < part.ngen; ++g)
          if (mask >> g & 1) {
            if (!first) out << "^";
            first = false;
            out << "h*_" << sub.parent.names[sub.h_basis[g]];
          }
      }
    }
  if (!any) out << "0";
  return out.str();
}

PolyQ h_action(const SubalgebraData& sub, int h_parent_index, const PolyQ& F) {
  if (sub.h_slot(h_parent_index) < 0)
    throw std::invalid_argument("h_action generator is not in h");
  PolyQ r(sub.qdim());
  for (int s = 0; s < sub.qdim(); ++s) {
    PolyQ dF = F.derivative(s);
    if (dF.is_zero()) continue;
    SparseVec br = sub.parent.bracket_basis(h_parent_index, sub.q_basis[s]);
    PolyQ img = sub.chart_linear(br);
    if (!img.is_zero()) r += dF * img;
  }
  return r;
}

namespace {

// exterior part of the differential: d(theta^c) = -1/2 c_ab^c theta^a theta^b,
// extended as a derivation, i.e. -sum_{a<b} c_ab^c theta^a theta^b iota_c
ExtPoly ce_exterior(const SubalgebraData& sub, const ExtPoly& F) {
  ExtPoly r(sub.qdim(), sub.hdim());
  for (int a = 0; a < sub.hdim(); ++a)
    for (int b = a + 1; b < sub.hdim(); ++b) {
      SparseVec br = sub.parent.bracket_basis(sub.h_basis[a], sub.h_basis[b]);
      for (const auto& [k, c] : br) {
        int cs = sub.h_slot(k);
        if (cs < 0 || c == Rat(0)) continue;
        r -= F.iota(cs).theta(b).theta(a).scaled(c);
      }
    }
  return r;
}

}  // namespace

ExtPoly d_ce(const SubalgebraData& sub, const ExtPoly& F) {
  ExtPoly r(sub.qdim(), sub.hdim());
  for (int b = 0; b < sub.hdim(); ++b) {
    ExtPoly acted(sub.qdim(), sub.hdim());
    for (const auto& [mask, p] : F.terms)
      acted.add_term(mask, h_action(sub, sub.h_basis[b], p));
    r += acted.theta(b);
  }
  r += ce_exterior(sub, F);
  return r;
}

ExtPoly apply_colored(const KGraph& g, const SubalgebraData& sub,
                      const std::vector<const ExtPoly*>& args) {
  check_admissible(g);
  if (static_cast<int>(args.size()) != g.m)
    throw std::invalid_argument("argument count does not match the ground arity");
  const int nq = sub.qdim(), nh = sub.hdim();
  for (const ExtPoly* a : args)
    if (a->nvars != nq || a->ngen != nh)
      throw std::invalid_argument("argument chart does not match the subalgebra");

  ExtPoly acc(nq, nh);
  auto wedge_args = [&]() {
    ExtPoly w = *args[0];
    for (int j = 1; j < g.m; ++j) w = w.wedge(*args[j]);
    return w;
  };
  if (g.n == 0) return wedge_args();
  if (!g.colored())
    throw std::invalid_argument("chart operators need tangent/normal colors");

  std::vector<int> indeg(g.n, 0), in_edge(g.n, -1);
  for (int e = 0; e < g.edge_count(); ++e) {
    Target t = g.target(e);
    if (t.kind == TargetKind::Aerial) {
      if (++indeg[t.index] > 1) return acc;  // linear vertex functions
      in_edge[t.index] = e;
    }
  }

  std::vector<char> in_h(sub.parent.dim, 0);
  for (int i : sub.h_basis) in_h[i] = 1;
  auto edge_ok = [&](int e, int parent_index) {
    Target t = g.target(e);
    bool want_h =
        t.kind == TargetKind::Infinity || g.color(e).s1 < 0;
    return want_h == static_cast<bool>(in_h[parent_index]);
  };

  // sparse support of the half bracket, both index orders
  struct PairEntry {
    int i, j;
    SparseVec half;
  };
  std::vector<PairEntry> support;
  for (const auto& [ij, c] : sub.parent.structure) {
    if (c.empty()) continue;
    SparseVec half, mhalf;
    for (const auto& [k, v] : c) {
      half[k] = v / 2;
      mhalf[k] = -v / 2;
    }
    support.push_back({ij.first, ij.second, half});
    support.push_back({ij.second, ij.first, mhalf});
  }

  // per-vertex entries compatible with the colors of its two edges
  std::vector<std::vector<int>> vsupport(g.n);
  for (int v = 0; v < g.n; ++v) {
    for (int s = 0; s < static_cast<int>(support.size()); ++s)
      if (edge_ok(2 * v, support[s].i) && edge_ok(2 * v + 1, support[s].j))
        vsupport[v].push_back(s);
    if (vsupport[v].empty()) return acc;
  }

  int inf_count = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.target(e).kind == TargetKind::Infinity) ++inf_count;

  std::vector<int> pos(g.n, 0);
  while (true) {
    auto entry = [&](int v) -> const PairEntry& {
      return support[vsupport[v][pos[v]]];
    };
    auto edge_index = [&](int e) {
      const PairEntry& pe = entry(e / 2);
      return e % 2 == 0 ? pe.i : pe.j;
    };

    Rat scalar = 1;
    bool dead = false;
    for (int a = 0; a < g.n && !dead; ++a) {
      if (indeg[a] == 0) continue;
      auto it = entry(a).half.find(edge_index(in_edge[a]));
      if (it == entry(a).half.end() || it->second == Rat(0))
        dead = true;
      else
        scalar *= it->second;
    }

    if (!dead) {
      // per-argument ground operations, in global edge order
      std::vector<Mono> deriv(g.m, Mono(nq, 0));
      std::vector<std::vector<int>> iotas(g.m);  // generator slots
      std::vector<int> thetas;
      for (int e = 0; e < g.edge_count(); ++e) {
        Target t = g.target(e);
        int k = edge_index(e);
        if (t.kind == TargetKind::Infinity) {
          thetas.push_back(sub.h_slot(k));
        } else if (t.kind == TargetKind::Ground) {
          if (g.color(e).s1 > 0)
            deriv[t.index][sub.q_slot(k)] += 1;
          else
            iotas[t.index].push_back(sub.h_slot(k));
        }
      }

      ExtPoly term(nq, nh);
      bool first = true;
      for (int j = 0; j < g.m && (first || !term.is_zero()); ++j) {
        ExtPoly part = *args[j];
        for (int s = 0; s < nq; ++s)
          for (int k = 0; k < deriv[j][s] && !part.is_zero(); ++k) {
            ExtPoly d(nq, nh);
            for (const auto& [mask, p] : part.terms)
              d.add_term(mask, p.derivative(s));
            part = std::move(d);
          }
        for (auto it = iotas[j].rbegin(); it != iotas[j].rend(); ++it)
          part = part.iota(*it);
        term = first ? part : term.wedge(part);
        first = false;
      }

      if (!term.is_zero()) {
        for (int a = 0; a < g.n; ++a)
          if (indeg[a] == 0)
            term = term.poly_scaled(sub.chart_linear(entry(a).half));
        for (auto it = thetas.rbegin(); it != thetas.rend(); ++it)
          term = term.theta(*it);
        if (inf_count % 2 == 1) term = term.scaled(Rat(-1));
        term = term.scaled(scalar);
        acc += term;
      }
    }

    int v = 0;
    while (v < g.n && ++pos[v] == static_cast<int>(vsupport[v].size()))
      pos[v++] = 0;
    if (v == g.n) break;
  }
  return acc;
}

namespace {

// every tangent/normal coloring of the non-escaping edges
void push_colorings(KGraph g, std::vector<KGraph>& sink) {
  std::vector<int> free_edges;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.target(e).kind != TargetKind::Infinity) free_edges.push_back(e);
  const int k = static_cast<int>(free_edges.size());
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    KGraph c = g;
    for (int b = 0; b < k; ++b) {
      int e = free_edges[b];
      c.colors[e / 2][e % 2] = EdgeColor{(mask >> b & 1) ? -1 : +1, 0};
    }
    sink.push_back(c);
  }
}

KGraph blank(int n) {
  KGraph g;
  g.n = n;
  g.m = 1;
  g.out.assign(n, {Target::ground(0), Target::ground(0)});
  g.colors.assign(n, {EdgeColor{+1, 0}, EdgeColor{+1, 0}});
  return g;
}

}  // namespace

std::vector<KGraph> mu0_graphs(int n) {
  if (n < 1 || n > 3)
    throw std::invalid_argument("differential graphs computed for 1 <= n <= 3");
  std::vector<KGraph> out;
  const EdgeColor inf{-1, 0};

  // chain with the last edge escaping
  {
    KGraph g = blank(n);
    for (int v = 0; v + 1 < n; ++v)
      g.out[v] = {Target::aerial(v + 1), Target::ground(0)};
    g.out[n - 1] = {Target::ground(0), Target::infinity()};
    g.colors[n - 1][1] = inf;
    push_colorings(g, out);
  }

  // cycle with one spoke escaping
  if (n >= 2) {
    KGraph g = blank(n);
    g.out[0] = {Target::aerial(1), Target::infinity()};
    g.colors[0][1] = inf;
    for (int v = 1; v < n; ++v)
      g.out[v] = {Target::aerial((v + 1) % n), Target::ground(0)};
    push_colorings(g, out);
  }

  // cycle carrying a chain that escapes (cycle length k, chain length n-k)
  for (int k = 2; k < n; ++k) {
    KGraph g = blank(n);
    g.out[0] = {Target::aerial(1 % k), Target::aerial(k)};  // spoke feeds the chain
    for (int v = 1; v < k; ++v)
      g.out[v] = {Target::aerial((v + 1) % k), Target::ground(0)};
    for (int v = k; v + 1 < n; ++v)
      g.out[v] = {Target::aerial(v + 1), Target::ground(0)};
    g.out[n - 1] = {Target::ground(0), Target::infinity()};
    g.colors[n - 1][1] = inf;
    push_colorings(g, out);
  }

  return out;
}

Mu0Result mu0_apply(const SubalgebraData& sub, const ReductionElement& F,
                    int order, WeightSource& ws) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("differential order capped at 3");
  Mu0Result r;
  r.value = ReductionElement(sub.qdim(), sub.hdim());

  // The exterior-word part of the first-order layer carries no graph: the
  // candidate graphs all vanish (a free vertex pairing two stabilizer
  // directions evaluates the character on a bracket of the stabilizer, and
  // normal-colored ground edges have zero weight), so the generator-word
  // rotation enters as the structural completion fixed by the first-order
  // normalization.
  for (const auto& [ef, part] : F.parts) {
    if (ef + 1 > order) continue;
    ExtPoly ext = ce_exterior(sub, part);
    if (!ext.is_zero()) r.value.add(ef + 1, ext);
  }

  for (int n = 1; n <= order; ++n) {
    for (const KGraph& g : mu0_graphs(n)) {
      // evaluate on every eps layer inside the truncation
      std::vector<std::pair<int, ExtPoly>> acting;
      for (const auto& [ef, part] : F.parts) {
        if (n + ef > order) continue;
        ExtPoly b = apply_colored(g, sub, {&part});
        if (!b.is_zero()) acting.emplace_back(n + ef, std::move(b));
      }
      if (acting.empty()) continue;

      auto w = ws.weight(g);
      if (!w) {
        r.missing.push_back(serialize_graph(g));
        r.exact = false;
        continue;
      }
      if (!w->exact) r.exact = false;
      Rat wv = w->exact ? w->snapped : rat_from_double(w->value);
      if (wv == Rat(0)) continue;
      // each escaping edge sits in the second slot of its vertex; the twin
      // assignment contributes equally, hence one factor of two per graph
      Rat scale = wv * 2;
      r.contributing.push_back(serialize_graph(g));
      for (auto& [eps, b] : acting) r.value.add(eps, b.scaled(scale));
    }
  }
  return r;
}

ReductionBasis reduction_basis(const SubalgebraData& sub, int order,
                               int degree_cap, WeightSource& ws) {
  if (order < 1 || order > 2)
    throw std::invalid_argument(
        "basis extraction supports order 1 and 2 (the even layer vanishes)");
  if (degree_cap < 0) throw std::invalid_argument("negative degree cap");
  const int nq = sub.qdim();

  // chart monomials of degree <= cap, deterministic order
  std::vector<Mono> monos;
  Mono m(nq, 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nq) {
      monos.push_back(m);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      m[var] = k;
      self(self, var + 1, left - k);
    }
    m[var] = 0;
  };
  rec(rec, 0, degree_cap);

  ReductionBasis out;

  // image coordinates: (eps power, word mask, chart monomial) -> row
  std::map<std::tuple<int, std::uint64_t, Mono>, int> rows3;
  std::vector<std::vector<Rat>> cols(monos.size());
  for (size_t ci = 0; ci < monos.size(); ++ci) {
    PolyQ p(nq);
    p.add_term(monos[ci], 1);
    Mu0Result mu = mu0_apply(sub, ReductionElement::scalar(sub, p), order, ws);
    if (!mu.exact) out.exact = false;
    for (const std::string& s : mu.missing) out.missing.push_back(s);
    for (const auto& [eps, part] : mu.value.parts)
      for (const auto& [mask, poly] : part.terms)
        for (const auto& [im, c] : poly.terms) {
          auto key = std::make_tuple(eps, mask, im);
          auto it = rows3.find(key);
          if (it == rows3.end())
            it = rows3.emplace(key, static_cast<int>(rows3.size())).first;
          if (static_cast<int>(cols[ci].size()) <= it->second)
            cols[ci].resize(it->second + 1, Rat(0));
          cols[ci][it->second] += c;
        }
  }
  const int nrows = static_cast<int>(rows3.size());
  const int ncols = static_cast<int>(monos.size());
  for (auto& c : cols) c.resize(nrows, Rat(0));

  // exact kernel by Gaussian elimination on the transpose
  std::vector<std::vector<Rat>> mat(nrows, std::vector<Rat>(ncols, Rat(0)));
  for (int c = 0; c < ncols; ++c)
    for (int rI = 0; rI < nrows; ++rI) mat[rI][c] = cols[c][rI];

  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < ncols && rank < nrows; ++c) {
    int piv = -1;
    for (int rI = rank; rI < nrows; ++rI)
      if (mat[rI][c] != Rat(0)) {
        piv = rI;
        break;
      }
    if (piv < 0) continue;
    std::swap(mat[rank], mat[piv]);
    Rat inv = Rat(1) / mat[rank][c];
    for (int cc = c; cc < ncols; ++cc) mat[rank][cc] *= inv;
    for (int rI = 0; rI < nrows; ++rI) {
      if (rI == rank || mat[rI][c] == Rat(0)) continue;
      Rat f = mat[rI][c];
      for (int cc = c; cc < ncols; ++cc) mat[rI][cc] -= f * mat[rank][cc];
    }
    pivot_col.push_back(c);
    ++rank;
  }

  std::vector<char> is_pivot(ncols, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  for (int c = 0; c < ncols; ++c) {
    if (is_pivot[c]) continue;
    PolyQ p(nq);
    p.add_term(monos[c], 1);
    for (int rI = 0; rI < rank; ++rI)
      if (mat[rI][c] != Rat(0)) p.add_term(monos[pivot_col[rI]], -mat[rI][c]);
    out.basis.push_back(ReductionElement::scalar(sub, p));
  }
  return out;
}

namespace {

KGraph flip_sorted_colored(KGraph g) {
  for (int v = 0; v < g.n; ++v)
    if (g.out[v][1] < g.out[v][0]) {
      std::swap(g.out[v][0], g.out[v][1]);
      std::swap(g.colors[v][0], g.colors[v][1]);
    }
  return g;
}

}  // namespace

CfResult cf_star(const SubalgebraData& sub, const ReductionElement& F,
                 const ReductionElement& G, int order, WeightSource& ws) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("chart product capped at order 2");
  CfResult r;
  r.value = ReductionElement(sub.qdim(), sub.hdim());

  for (const auto& [ef, pf] : F.parts)
    for (const auto& [eg, pg] : G.parts)
      if (ef + eg <= order) r.value.add(ef + eg, pf.wedge(pg));

  for (int n = 1; n <= order; ++n) {
    std::map<std::string, long long> classes;
    for (const auto& g : enumerate_graphs(n, 2, EnumMode::TwoColor))
      ++classes[canonical_id(flip_sorted_colored(g))];

    const Rat inv_fact = Rat(1) / factorial(n);
    for (const auto& [id, count] : classes) {
      KGraph rep = parse_graph(id);
      std::vector<std::tuple<int, ExtPoly>> acting;
      for (const auto& [ef, pf] : F.parts)
        for (const auto& [eg, pg] : G.parts) {
          if (n + ef + eg > order) continue;
          ExtPoly b = apply_colored(rep, sub, {&pf, &pg});
          if (!b.is_zero()) acting.emplace_back(n + ef + eg, std::move(b));
        }
      if (acting.empty()) continue;

      auto w = ws.weight(rep);
      if (!w) {
        r.missing.push_back(id);
        r.exact = false;
        continue;
      }
      if (!w->exact) r.exact = false;
      Rat wv = w->exact ? w->snapped : rat_from_double(w->value);
      if (wv == Rat(0)) continue;
      Rat scale = wv * Rat(count) * inv_fact;
      for (auto& [eps, b] : acting) r.value.add(eps, b.scaled(scale));
    }
  }

  Mu0Result mf = mu0_apply(sub, F, order, ws);
  Mu0Result mg = mu0_apply(sub, G, order, ws);
  r.residual_f = mf.value;
  r.residual_g = mg.value;
  if (!mf.exact || !mg.exact) r.exact = false;
  return r;
}

}  // namespace kgc
