#pragma once

#include <string>
#include <vector>

#include "kgc/lie_algebra.hpp"
#include "kgc/weights.hpp"
#include "kgc/wheels.hpp"

namespace kgc {

// One-parameter family of linear Poisson brackets on the double of a base
// algebra, written on the basis K.* then P.*:
//   [K_i, K_j] = c_ij^k K_k
//   [K_i, P_j] = c_ij^k P_k
//   [P_i, P_j] = c_ij^k ((1 - t^2) K_k + 2 t P_k)
// t = 0 is the K/P double; t = 1 coincides with the K/G form of g + g.
// Entries of `a` are univariate polynomials in t, antisymmetric in the
// first two indices.
struct DeformedBracket {
  int dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<std::vector<PolyQ>>> a;  // a[i][j][k] in Q[t]

  // coefficient of the n-th coordinate in the Jacobi defect of the triple
  // (i, j, l); identically zero exactly when every specialization in t
  // satisfies the Jacobi identity
  PolyQ jacobiator(int i, int j, int l, int n) const;
};

// Builds the family and verifies the Jacobi identity symbolically in t;
// throws std::logic_error naming the first failing triple otherwise.
DeformedBracket pi_t_double(const LieAlgebra& base);

// Specializes the family at a rational parameter value (re-checked).
LieAlgebra pi_t_at(const DeformedBracket& fam, const Rat& t);

// Order-2 gauge density of the t = 1 bracket: two-vertex wheels with their
// spokes on the ground arguments, evaluated on the doubled structure
// constants. Variables: x block (first argument) then y block.
WheelSeries duflo_density(const LieAlgebra& base, int order,
                          const WeightSourceOptions& opt,
                          WeightCache* cache = nullptr);

// Closed form the order-2 density must reproduce:
//   (1/48) (T2(2X) + T2(2Y) - T2(2(X+Y))) = -(1/6) tr_g(ad X ad Y)
// where T2(Z) = tr_g((ad Z)^2). Same variable layout as duflo_density.
PolyQ duflo_density_oracle(const LieAlgebra& base);

// Exponential symbol of the K/P double of an arbitrary base algebra; the
// reduction product on the double collapses to the plain product exactly
// when this series equals 1.
WheelSeries e_double(const LieAlgebra& base, int order,
                     const WeightSourceOptions& opt,
                     WeightCache* cache = nullptr);

}  // namespace kgc
