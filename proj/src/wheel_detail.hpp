#pragma once

// Shared internals for wheel-type graph series: trace symbols, the running
// snapped/numeric/sigma accumulator, and two-vertex wheel builders.

#include <cmath>
#include <string>
#include <vector>

#include "kgc/graph.hpp"
#include "kgc/lie_algebra.hpp"
#include "kgc/weights.hpp"
#include "kgc/wheels.hpp"

namespace kgc::wheel_detail {

inline PolyD to_double_poly(const PolyQ& p) {
  PolyD r(p.nvars);
  for (const auto& [m, c] : p.terms) r.terms.emplace(m, to_double(c));
  return r;
}

inline PolyD abs_double_poly(const PolyQ& p) {
  PolyD r(p.nvars);
  for (const auto& [m, c] : p.terms) r.terms.emplace(m, std::abs(to_double(c)));
  return r;
}

// ad of the generic element sum_s x_{offset+s} e_{gens[s]}
inline MatPoly ad_chart(const LieAlgebra& L, const std::vector<int>& gens,
                        int nvars, int offset) {
  const int d = L.dim;
  MatPoly M(d, std::vector<PolyQ>(d, PolyQ(nvars)));
  for (int s = 0; s < static_cast<int>(gens.size()); ++s) {
    MatQ a = ad_matrix(L, SparseVec{{gens[s], Rat(1)}});
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (a[i][j] != Rat(0))
          M[i][j] += PolyQ::variable(nvars, offset + s, a[i][j]);
  }
  return M;
}

// tr(P_{rows2} M1 P_{rows1} M2)
inline PolyQ pair_trace(const MatPoly& M1, const MatPoly& M2,
                        const std::vector<int>& rows2,
                        const std::vector<int>& rows1, int nvars) {
  PolyQ t(nvars);
  for (int i : rows2)
    for (int j : rows1) t += M1[i][j] * M2[j][i];
  return t;
}

// single wheel contribution: weight times quarter-trace symbol, tallied
// into the three running parts of a series
struct SeriesAccum {
  PolyQ snapped;
  PolyD numeric;
  PolyD sigma;
  bool exact = true;
  std::vector<std::string> missing;

  explicit SeriesAccum(int nvars)
      : snapped(nvars), numeric(nvars), sigma(nvars) {}

  void tally(WeightSource& ws, const KGraph& g, const PolyQ& sym,
             const Rat& scale) {
    if (sym.is_zero()) return;
    auto w = ws.weight(g);
    if (!w) {
      missing.push_back(serialize_graph(g));
      exact = false;
      return;
    }
    if (w->exact)
      snapped += sym.scaled(w->snapped * scale);
    else
      exact = false;
    double wnum = w->exact ? to_double(w->snapped) : w->value;
    numeric += to_double_poly(sym).scaled(wnum * to_double(scale));
    sigma += abs_double_poly(sym).scaled(w->std_error * to_double(scale));
  }

  WheelSeries finish(int nvars) const {
    WheelSeries s;
    s.snapped = EpsPolyQ(nvars);
    s.numeric = EpsPolyD(nvars);
    s.sigma = EpsPolyD(nvars);
    s.snapped.add(0, PolyQ::constant(nvars, 1));
    s.numeric.add(0, PolyD::constant(nvars, 1.0));
    s.snapped.add(2, snapped);
    s.numeric.add(2, numeric);
    s.sigma.add(2, sigma);
    s.exact = exact;
    s.missing = missing;
    return s;
  }
};

// 2-cycle with one spoke per vertex; each vertex's edges are ordered
// (cycle, spoke), the cycle edge colored c_i and the spokes '+'
inline KGraph two_wheel_colored(int m, int ground0, int ground1, int c1,
                                int c2, int s2) {
  KGraph g;
  g.n = 2;
  g.m = m;
  g.out = {{Target::aerial(1), Target::ground(ground0)},
           {Target::aerial(0), Target::ground(ground1)}};
  g.colors = {{EdgeColor{c1, s2}, EdgeColor{+1, s2}},
              {EdgeColor{c2, s2}, EdgeColor{+1, s2}}};
  return g;
}

// same shape without colors, for single-brane weights
inline KGraph two_wheel_plain(int ground0, int ground1) {
  KGraph g;
  g.n = 2;
  g.m = 2;
  g.out = {{Target::aerial(1), Target::ground(ground0)},
           {Target::aerial(0), Target::ground(ground1)}};
  return g;
}

}  // namespace kgc::wheel_detail
