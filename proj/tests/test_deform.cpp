#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kgc/deform.hpp"
#include "kgc/lie_algebra.hpp"
#include "kgc/subalgebra.hpp"
#include "kgc/weights.hpp"

using namespace kgc;

namespace {

LieAlgebra alg(const std::string& name) {
  auto a = algebra_preset(name);
  REQUIRE(a.has_value());
  return *a;
}

struct Sources {
  WeightCache cache{WeightCache::env_dir()};
  WeightSourceOptions opt;
};

// dense structure-constant tensor A[i][j][k], antisymmetric in (i, j)
using Tensor = std::vector<std::vector<std::vector<Rat>>>;

Tensor tensor_of(const LieAlgebra& L) {
  Tensor A(L.dim, std::vector<std::vector<Rat>>(
                      L.dim, std::vector<Rat>(L.dim, Rat(0))));
  for (const auto& [ij, terms] : L.structure)
    for (const auto& [k, c] : terms) {
      A[ij.first][ij.second][k] += c;
      A[ij.second][ij.first][k] -= c;
    }
  return A;
}

// Lie derivative of a linear bivector A along a linear vector field with
// coefficient matrix b (v^i = sum_m b[i][m] xi_m)
Tensor lie_derivative(const Tensor& A, const std::vector<std::vector<Rat>>& b) {
  const int n = static_cast<int>(A.size());
  Tensor R(n, std::vector<std::vector<Rat>>(n, std::vector<Rat>(n, Rat(0))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rat s(0);
        for (int m = 0; m < n; ++m) {
          s += A[i][j][m] * b[m][k];
          s -= b[i][m] * A[m][j][k];
          s -= b[j][m] * A[i][m][k];
        }
        R[i][j][k] = s;
      }
  return R;
}

SparseVec apply_map(const std::vector<SparseVec>& phi, const SparseVec& u) {
  SparseVec r;
  for (const auto& [i, c] : u)
    for (const auto& [k, d] : phi[i]) {
      r[k] += c * d;
      if (r[k] == Rat(0)) r.erase(k);
    }
  return r;
}

}  // namespace

TEST_CASE("family brackets satisfy Jacobi symbolically in the parameter") {
  for (const std::string& name :
       {"abelian3", "heisenberg3", "sl2", "solvable4", "aff1"}) {
    CAPTURE(name);
    DeformedBracket fam = pi_t_double(alg(name));
    CHECK(fam.dim == 2 * alg(name).dim);
  }

  // explicit scan of the defect polynomials on one family
  DeformedBracket fam = pi_t_double(alg("sl2"));
  for (int i = 0; i < fam.dim; ++i)
    for (int j = i + 1; j < fam.dim; ++j)
      for (int l = j + 1; l < fam.dim; ++l)
        for (int n = 0; n < fam.dim; ++n)
          CHECK(fam.jacobiator(i, j, l, n).is_zero());

  // breaking one coefficient must surface in some defect polynomial
  DeformedBracket bad = fam;
  bad.a[0][1][2] += PolyQ::constant(1, 1);
  bad.a[1][0][2] -= PolyQ::constant(1, 1);
  bool broken = false;
  for (int i = 0; i < bad.dim && !broken; ++i)
    for (int j = i + 1; j < bad.dim && !broken; ++j)
      for (int l = j + 1; l < bad.dim && !broken; ++l)
        for (int n = 0; n < bad.dim; ++n)
          if (!bad.jacobiator(i, j, l, n).is_zero()) {
            broken = true;
            break;
          }
  CHECK(broken);
}

TEST_CASE("the endpoints specialize to the two standard doubles") {
  for (const std::string& name : {"sl2", "aff1", "solvable4"}) {
    CAPTURE(name);
    LieAlgebra base = alg(name);
    DeformedBracket fam = pi_t_double(base);
    CHECK(pi_t_at(fam, Rat(0)).structure == double_kp_algebra(base).structure);
    CHECK(pi_t_at(fam, Rat(1)).structure == double_kg_algebra(base).structure);
  }
}

TEST_CASE("every parameter value gives an algebra isomorphic to g + g") {
  // K_a -> K_a, P_a -> (t - 1) K_a + G_a intertwines the brackets
  LieAlgebra base = alg("sl2");
  const int d = base.dim;
  DeformedBracket fam = pi_t_double(base);
  LieAlgebra kg = double_kg_algebra(base);
  for (const Rat& t : {rat(3, 2), rat(-2), rat(0)}) {
    CAPTURE(to_double(t));
    LieAlgebra Lt = pi_t_at(fam, t);
    std::vector<SparseVec> phi(2 * d);
    for (int a = 0; a < d; ++a) {
      phi[a] = {{a, Rat(1)}};
      phi[d + a] = {{d + a, Rat(1)}};
      Rat shift = t - Rat(1);
      if (shift != Rat(0)) phi[d + a][a] = shift;
    }
    for (int i = 0; i < 2 * d; ++i)
      for (int j = i + 1; j < 2 * d; ++j) {
        SparseVec lhs = apply_map(phi, Lt.bracket_basis(i, j));
        SparseVec rhs = kg.bracket_vec(phi[i], phi[j]);
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("the mixing vector field integrates the endpoint to the family") {
  // v = -sum_a K_a d/dP_a: the family is the (polynomial) flow
  //   pi_t = pi_0 + t [v, pi_0] + (t^2/2) [v, [v, pi_0]]
  for (const std::string& name : {"sl2", "solvable4"}) {
    CAPTURE(name);
    LieAlgebra base = alg(name);
    const int d = base.dim;
    DeformedBracket fam = pi_t_double(base);
    Tensor A0 = tensor_of(pi_t_at(fam, Rat(0)));
    std::vector<std::vector<Rat>> b(
        2 * d, std::vector<Rat>(2 * d, Rat(0)));
    for (int a = 0; a < d; ++a) b[d + a][a] = Rat(-1);
    Tensor A1 = lie_derivative(A0, b);
    Tensor A2 = lie_derivative(A1, b);
    Tensor A3 = lie_derivative(A2, b);
    for (int i = 0; i < 2 * d; ++i)
      for (int j = 0; j < 2 * d; ++j)
        for (int k = 0; k < 2 * d; ++k) {
          PolyQ expect(1);
          expect.add_term(Mono{0}, A0[i][j][k]);
          expect.add_term(Mono{1}, A1[i][j][k]);
          expect.add_term(Mono{2}, A2[i][j][k] / Rat(2));
          CHECK(fam.a[i][j][k] == expect);
          CHECK(A3[i][j][k] == Rat(0));  // the flow truncates
        }
  }
}

TEST_CASE("gauge density of the doubled bracket matches the closed form") {
  Sources s;
  for (const std::string& name : {"sl2", "aff1"}) {
    CAPTURE(name);
    LieAlgebra base = alg(name);
    WheelSeries dd = duflo_density(base, 2, s.opt, &s.cache);
    PolyQ oracle = duflo_density_oracle(base);
    CHECK(dd.missing.empty());
    CHECK(dd.exact);
    CHECK(dd.snapped.at(2) == oracle);

    // the sampled estimates agree independently of snapping
    PolyD num = dd.numeric.at(2);
    PolyD sg = dd.sigma.at(2);
    for (const auto& [m, c] : oracle.terms) {
      double got = num.terms.count(m) ? num.terms.at(m) : 0.0;
      double sigma = sg.terms.count(m) ? sg.terms.at(m) : 0.0;
      CHECK(std::abs(got - to_double(c)) <= 3.0 * sigma + 1e-12);
    }
  }

  // nilpotent base: ad X ad Y is traceless, so both sides vanish without
  // consulting any weight
  WheelSeries nil = duflo_density(alg("heisenberg3"), 2, s.opt, &s.cache);
  CHECK(nil.exact);
  CHECK(nil.snapped.at(2).is_zero());
  CHECK(duflo_density_oracle(alg("heisenberg3")).is_zero());

  CHECK_THROWS_AS((void)duflo_density(alg("sl2"), 3, s.opt, &s.cache),
                  std::invalid_argument);
}

TEST_CASE("exponential symbol of a fresh double is one through order two") {
  Sources s;
  WheelSeries ab = e_double(alg("abelian3"), 2, s.opt, &s.cache);
  CHECK(ab.exact);
  CHECK(ab.snapped.at(2).is_zero());

  for (const std::string& name : {"sl2", "aff1"}) {
    CAPTURE(name);
    WheelSeries e = e_double(alg(name), 2, s.opt, &s.cache);
    CHECK(e.missing.empty());
    if (e.exact) CHECK(e.snapped.at(2).is_zero());
    PolyD num = e.numeric.at(2);
    PolyD sg = e.sigma.at(2);
    for (const auto& [m, c] : num.terms) {
      double sigma = sg.terms.count(m) ? sg.terms.at(m) : 0.0;
      CHECK(std::abs(c) <= 3.0 * sigma + 1e-12);
    }
  }
}
