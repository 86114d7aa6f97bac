#include "kgc/star.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace kgc {

namespace {

// linear polynomial <xi, v> on the dual
PolyQ linear_form(int d, const SparseVec& v) {
  PolyQ p(d);
  for (const auto& [k, c] : v) p.add_term([&] {
    Mono m(d, 0);
    m[k] = 1;
    return m;
  }(), c);
  return p;
}

PolyD to_double(const PolyQ& p) {
  PolyD r(p.nvars);
  for (const auto& [m, c] : p.terms) r.terms.emplace(m, kgc::to_double(c));
  return r;
}

PolyQ truncate_degree(const PolyQ& p, int cap) {
  PolyQ r(p.nvars);
  for (const auto& [m, c] : p.terms) {
    int deg = 0;
    for (int e : m) deg += e;
    if (deg <= cap) r.terms.emplace(m, c);
  }
  return r;
}

// per-vertex edge-pair ordering; B and w flip sign together, so any orbit
// member represents its class faithfully
KGraph flip_sorted(KGraph g) {
  for (int v = 0; v < g.n; ++v)
    if (g.out[v][1] < g.out[v][0]) {
      std::swap(g.out[v][0], g.out[v][1]);
      if (g.colored()) std::swap(g.colors[v][0], g.colors[v][1]);
    }
  return g;
}

}  // namespace

PolyQ apply_b_gamma(const KGraph& g, const LieAlgebra& alg, const PolyQ& f,
                    const PolyQ& h) {
  check_admissible(g);
  if (g.m != 2)
    throw std::invalid_argument("bidifferential operators need two ground vertices");
  if (g.colored())
    throw std::invalid_argument("colored graphs take the reduction operator route");
  if (g.infinity_edge_count() > 0)
    throw std::invalid_argument("infinity edges carry no derivative");
  const int d = alg.dim;
  if (f.nvars != d || h.nvars != d)
    throw std::invalid_argument("polynomial chart does not match the algebra dimension");

  if (g.n == 0) return f * h;
  PolyQ zero(d);

  std::vector<int> indeg(g.n, 0), in_edge(g.n, -1);
  for (int e = 0; e < g.edge_count(); ++e) {
    Target t = g.target(e);
    if (t.kind == TargetKind::Aerial) {
      if (++indeg[t.index] > 1) return zero;  // second derivative of linear pi
      in_edge[t.index] = e;
    }
  }

  // sparse support of pi: ordered index pairs with half-bracket coefficients
  struct PairEntry {
    int i, j;
    SparseVec half;   // 1/2 [e_i, e_j]
    PolyQ linear;     // the same as a polynomial on the dual
  };
  std::vector<PairEntry> support;
  for (const auto& [ij, c] : alg.structure) {
    if (c.empty()) continue;
    SparseVec half, mhalf;
    for (const auto& [k, v] : c) {
      half[k] = v / 2;
      mhalf[k] = -v / 2;
    }
    support.push_back({ij.first, ij.second, half, linear_form(d, half)});
    support.push_back({ij.second, ij.first, mhalf, linear_form(d, mhalf)});
  }
  if (support.empty()) return zero;  // abelian

  std::map<Mono, PolyQ> df_memo, dh_memo;
  auto derivative_of = [&](const PolyQ& p, const Mono& counts,
                           std::map<Mono, PolyQ>& memo) -> const PolyQ& {
    auto it = memo.find(counts);
    if (it != memo.end()) return it->second;
    PolyQ r = p;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < counts[i]; ++k) r = r.derivative(i);
    return memo.emplace(counts, std::move(r)).first->second;
  };

  PolyQ acc(d);
  std::vector<int> choice(g.n, 0);
  const int width = static_cast<int>(support.size());
  while (true) {
    // index of every edge is fixed by its source vertex's support choice
    auto edge_index = [&](int e) {
      const PairEntry& pe = support[choice[e / 2]];
      return e % 2 == 0 ? pe.i : pe.j;
    };

    Rat scalar = 1;
    bool dead = false;
    for (int a = 0; a < g.n && !dead; ++a) {
      if (indeg[a] == 0) continue;
      const PairEntry& pe = support[choice[a]];
      auto it = pe.half.find(edge_index(in_edge[a]));
      if (it == pe.half.end())
        dead = true;
      else
        scalar *= it->second;
    }

    if (!dead) {
      Mono df(d, 0), dh(d, 0);
      for (int e = 0; e < g.edge_count(); ++e) {
        Target t = g.target(e);
        if (t.kind != TargetKind::Ground) continue;
        (t.index == 0 ? df : dh)[edge_index(e)] += 1;
      }
      const PolyQ& Df = derivative_of(f, df, df_memo);
      if (!Df.is_zero()) {
        const PolyQ& Dh = derivative_of(h, dh, dh_memo);
        if (!Dh.is_zero()) {
          PolyQ term = (Df * Dh).scaled(scalar);
          for (int a = 0; a < g.n; ++a)
            if (indeg[a] == 0) term = term * support[choice[a]].linear;
          acc += term;
        }
      }
    }

    int pos = 0;
    while (pos < g.n && ++choice[pos] == width) choice[pos++] = 0;
    if (pos == g.n) break;
  }
  return acc;
}

StarResult star(const LieAlgebra& alg, const EpsPolyQ& f, const EpsPolyQ& h,
                int order, const GraphWeightFn& weights) {
  const int d = alg.dim;
  if (f.nvars != d || h.nvars != d)
    throw std::invalid_argument("polynomial chart does not match the algebra dimension");
  if (order < 0) throw std::invalid_argument("negative truncation order");
  EnumOptions eopt;
  if (order > eopt.cap_essential)
    throw std::invalid_argument("order exceeds the essential enumeration cap");

  StarResult r;
  r.series = EpsPolyQ(d);
  r.numeric = EpsPolyD(d);

  // eps^0 layer: the pointwise product
  for (const auto& [ef, pf] : f.parts)
    for (const auto& [eh, ph] : h.parts) {
      if (ef + eh > order) continue;
      PolyQ prod = pf * ph;
      r.series.add(ef + eh, prod);
      r.numeric.add(ef + eh, to_double(prod));
    }

  for (int n = 1; n <= order; ++n) {
    // one representative per relabel-and-flip class, with its class size
    std::map<std::string, long long> classes;
    for (const auto& g : enumerate_graphs(n, 2, EnumMode::Essential))
      ++classes[canonical_id(flip_sorted(g))];

    const Rat inv_fact = Rat(1) / factorial(n);
    for (const auto& [id, count] : classes) {
      KGraph rep = parse_graph(id);
      int g1 = 0, g2 = 0;
      for (int e = 0; e < rep.edge_count(); ++e) {
        Target t = rep.target(e);
        if (t.kind == TargetKind::Ground) (t.index == 0 ? g1 : g2) += 1;
      }

      // evaluate the operator on every eps layer pair it could act on
      std::vector<std::tuple<int, PolyQ>> acting;
      for (const auto& [ef, pf] : f.parts)
        for (const auto& [eh, ph] : h.parts) {
          if (n + ef + eh > order) continue;
          if (g1 > pf.degree() || g2 > ph.degree()) continue;
          PolyQ b = apply_b_gamma(rep, alg, pf, ph);
          if (!b.is_zero()) acting.emplace_back(n + ef + eh, std::move(b));
        }
      if (acting.empty()) continue;  // weight never requested

      auto w = weights(rep);
      if (!w) {
        r.missing.push_back(id);
        r.exact = false;
        continue;
      }
      const Rat scale = Rat(count) * inv_fact;
      const double wnum = w->exact ? kgc::to_double(w->snapped) : w->value;
      for (auto& [eps, b] : acting) {
        if (w->exact)
          r.series.add(eps, b.scaled(w->snapped * scale));
        else
          r.exact = false;
        r.numeric.add(eps, to_double(b).scaled(wnum * kgc::to_double(scale)));
      }
    }
  }
  return r;
}

namespace {

// log(sinh(x/2)/(x/2)) as a truncated power series
std::vector<Rat> log_sinhc_series(int order) {
  std::vector<Rat> s(order + 1, Rat(0));
  Rat pow4 = 1, fact = 1;  // 4^m, (2m+1)!
  for (int m = 0; 2 * m <= order; ++m) {
    if (m > 0) {
      pow4 *= 4;
      fact *= Rat(2 * m) * Rat(2 * m + 1);
    }
    s[2 * m] = Rat(1) / (pow4 * fact);
  }
  std::vector<Rat> l(order + 1, Rat(0));
  for (int n = 1; n <= order; ++n) {
    Rat acc = s[n];
    for (int j = 1; j < n; ++j) acc -= Rat(j) * l[j] * s[n - j] / Rat(n);
    l[n] = acc;
  }
  return l;
}

}  // namespace

InvariantSeries j_series(const LieAlgebra& alg, int order) {
  (void)alg;  // the coefficients are universal
  if (order < 0) throw std::invalid_argument("negative truncation order");
  auto l = log_sinhc_series(order);
  InvariantSeries out;
  out.order = order;
  for (int k = 1; 2 * k <= order; ++k) out.coeff.push_back(l[2 * k]);
  return out;
}

PolyQ j_half_symbol(const LieAlgebra& alg, int order) {
  const int d = alg.dim;
  auto series = j_series(alg, order);

  // S = sum b_{2k} tr((ad X)^{2k}) truncated past total degree `order`
  PolyQ S(d);
  if (!series.coeff.empty()) {
    MatPoly ad = ad_generic(alg, d, 0);
    MatPoly power = ad;
    for (int k = 1; 2 * k <= order; ++k) {
      power = mat_mul(power, ad);  // now (ad X)^{2k}
      S += trace(power).scaled(series.coeff[k - 1]);
      if (2 * (k + 1) <= order) power = mat_mul(power, ad);
    }
  }

  // exp(S/2), exact because S has no constant term
  PolyQ half = S.scaled(rat(1, 2));
  PolyQ out = PolyQ::constant(d, 1);
  PolyQ term = PolyQ::constant(d, 1);
  for (int p = 1; 2 * p <= order; ++p) {
    term = truncate_degree(term * half, order).scaled(Rat(1) / Rat(p));
    if (term.is_zero()) break;
    out += term;
  }
  return out;
}

EpsPolyQ duflo_map(const LieAlgebra& alg, const EpsPolyQ& F, int order) {
  const int d = alg.dim;
  if (F.nvars != d)
    throw std::invalid_argument("polynomial chart does not match the algebra dimension");
  PolyQ J = j_half_symbol(alg, order);
  EpsPolyQ out(d);
  for (const auto& [m, c] : J.terms) {
    int t = 0;
    for (int e : m) t += e;
    for (const auto& [eps, part] : F.parts) {
      if (eps + t > order) continue;
      PolyQ p = part;
      for (int i = 0; i < d && !p.is_zero(); ++i)
        for (int k = 0; k < m[i]; ++k) p = p.derivative(i);
      out.add(eps + t, p.scaled(c));
    }
  }
  return out;
}

PolyQ coadjoint_action(const LieAlgebra& alg, int i, const PolyQ& F) {
  const int d = alg.dim;
  if (F.nvars != d)
    throw std::invalid_argument("polynomial chart does not match the algebra dimension");
  PolyQ out(d);
  for (int j = 0; j < d; ++j) {
    if (j == i) continue;
    SparseVec c = alg.bracket_basis(i, j);
    if (c.empty()) continue;
    PolyQ dj = F.derivative(j);
    if (dj.is_zero()) continue;
    out += linear_form(d, c) * dj;
  }
  return out;
}

bool is_invariant(const LieAlgebra& alg, const PolyQ& F) {
  for (int i = 0; i < alg.dim; ++i)
    if (!coadjoint_action(alg, i, F).is_zero()) return false;
  return true;
}

}  // namespace kgc
