#include "kgc/deform.hpp"

#include <numeric>
#include <stdexcept>

#include "kgc/subalgebra.hpp"
#include "wheel_detail.hpp"

namespace kgc {

namespace {

Rat eval_at(const PolyQ& p, const Rat& t) {
  Rat r(0);
  for (const auto& [m, c] : p.terms) {
    Rat term = c;
    for (int e = 0; e < m[0]; ++e) term *= t;
    r += term;
  }
  return r;
}

}  // namespace

PolyQ DeformedBracket::jacobiator(int i, int j, int l, int n) const {
  PolyQ r(1);
  for (int m = 0; m < dim; ++m) {
    r += a[i][j][m] * a[m][l][n];
    r += a[j][l][m] * a[m][i][n];
    r += a[l][i][m] * a[m][j][n];
  }
  return r;
}

DeformedBracket pi_t_double(const LieAlgebra& base) {
  const int d = base.dim;
  DeformedBracket fam;
  fam.dim = 2 * d;
  for (int i = 0; i < d; ++i) fam.names.push_back("K." + base.names[i]);
  for (int i = 0; i < d; ++i) fam.names.push_back("P." + base.names[i]);
  fam.a.assign(fam.dim, std::vector<std::vector<PolyQ>>(
                            fam.dim, std::vector<PolyQ>(fam.dim, PolyQ(1))));

  const PolyQ tvar = PolyQ::variable(1, 0, 1);
  PolyQ kk = PolyQ::constant(1, 1);
  kk -= tvar * tvar;                  // 1 - t^2
  const PolyQ twot = tvar.scaled(2);  // 2t

  auto add = [&](int i, int j, int k, const PolyQ& c) {
    fam.a[i][j][k] += c;
    fam.a[j][i][k] -= c;
  };
  for (const auto& [ij, terms] : base.structure) {
    auto [i, j] = ij;  // i < j by construction
    for (const auto& [k, cr] : terms) {
      const PolyQ c = PolyQ::constant(1, cr);
      add(i, j, k, c);                  // [K_i, K_j] = c K_k
      add(i, d + j, d + k, c);          // [K_i, P_j] = c P_k
      add(j, d + i, d + k, c.scaled(-1));
      add(d + i, d + j, k, c * kk);     // [P_i, P_j] = c ((1-t^2) K_k
      add(d + i, d + j, d + k, c * twot);  //             + 2t P_k)
    }
  }

  for (int i = 0; i < fam.dim; ++i)
    for (int j = i + 1; j < fam.dim; ++j)
      for (int l = j + 1; l < fam.dim; ++l)
        for (int n = 0; n < fam.dim; ++n)
          if (!fam.jacobiator(i, j, l, n).is_zero())
            throw std::logic_error("deformed bracket fails Jacobi on (" +
                                   fam.names[i] + ", " + fam.names[j] + ", " +
                                   fam.names[l] + ")");
  return fam;
}

LieAlgebra pi_t_at(const DeformedBracket& fam, const Rat& t) {
  LieAlgebra L;
  L.dim = fam.dim;
  L.names = fam.names;
  for (int i = 0; i < fam.dim; ++i)
    for (int j = i + 1; j < fam.dim; ++j) {
      SparseVec v;
      for (int k = 0; k < fam.dim; ++k) {
        Rat c = eval_at(fam.a[i][j][k], t);
        if (c != Rat(0)) v[k] = c;
      }
      if (!v.empty()) L.set_bracket(i, j, v);
    }
  check_jacobi(L);
  return L;
}

WheelSeries duflo_density(const LieAlgebra& base, int order,
                          const WeightSourceOptions& opt, WeightCache* cache) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("gauge density computed through order 2");
  const int d = base.dim;
  const int nv = 2 * d;

  LieAlgebra doubled = pi_t_at(pi_t_double(base), Rat(1));
  std::vector<int> pgens(d);
  std::iota(pgens.begin(), pgens.end(), d);
  std::vector<int> all(doubled.dim);
  std::iota(all.begin(), all.end(), 0);
  MatPoly adU[2] = {wheel_detail::ad_chart(doubled, pgens, nv, 0),
                    wheel_detail::ad_chart(doubled, pgens, nv, d)};

  WeightSource ws(ColorMode::Plain, opt, cache);
  wheel_detail::SeriesAccum acc(nv);
  if (order >= 2) {
    const Rat scale = rat(2, 1);  // 2^n/n!, full-bracket vertex convention
    for (int p0 : {0, 1})
      for (int p1 : {0, 1}) {
        PolyQ sym = wheel_detail::pair_trace(adU[p0], adU[p1], all, all, nv)
                        .scaled(rat(1, 4));
        acc.tally(ws, wheel_detail::two_wheel_plain(p0, p1), sym, scale);
      }
  }
  return acc.finish(nv);
}

PolyQ duflo_density_oracle(const LieAlgebra& base) {
  const int d = base.dim;
  const int nv = 2 * d;
  MatPoly adX = ad_generic(base, nv, 0);
  MatPoly adY = ad_generic(base, nv, d);
  return trace(mat_mul(adX, adY)).scaled(rat(-1, 6));
}

WheelSeries e_double(const LieAlgebra& base, int order,
                     const WeightSourceOptions& opt, WeightCache* cache) {
  std::vector<int> h(base.dim);
  std::iota(h.begin(), h.end(), 0);
  SubalgebraData sub = make_subalgebra(double_kp_algebra(base), h);
  return e_symbol(sub, order, opt, cache);
}

}  // namespace kgc
