#pragma once

#include <string>
#include <vector>

#include "kgc/graph.hpp"
#include "kgc/lie_algebra.hpp"
#include "kgc/lie_series.hpp"
#include "kgc/poly.hpp"

namespace kgc {

// The bidifferential operator of one graph against the linear Poisson
// structure of the algebra: aerial vertices carry pi^{ij} = 1/2 <xi,[e_i,e_j]>,
// each edge differentiates its target, the two ground vertices carry f and h.
// Graphs with an aerial in-degree above one return zero (pi is linear).
PolyQ apply_b_gamma(const KGraph& g, const LieAlgebra& alg, const PolyQ& f,
                    const PolyQ& h);

struct StarResult {
  // exact series; only trustworthy when exact is true
  EpsPolyQ series;
  // the same sum with every available weight as a double
  EpsPolyD numeric;
  bool exact = true;
  // classes whose weight the source could not provide at all
  std::vector<std::string> missing;
};

// f (star) h truncated at eps^order: the eps^0 part is the pointwise product,
// the eps^n layer sums class_count/n! * w_Gamma * B_Gamma over essential
// graph classes. Graphs that cannot act on the given degrees, and graphs
// whose operator vanishes identically on (f, h), never request a weight.
StarResult star(const LieAlgebra& alg, const EpsPolyQ& f, const EpsPolyQ& h,
                int order, const GraphWeightFn& weights);

// Coefficients b_{2k} of log(sinh(x/2)/(x/2)) = sum b_{2k} x^{2k}; the k-th
// entry of coeff multiplies the invariant tr((ad X)^{2k}).
struct InvariantSeries {
  int order = 0;            // truncation: 2k <= order contribute
  std::vector<Rat> coeff;   // coeff[k-1] = b_{2k}, k = 1 .. order/2
};

InvariantSeries j_series(const LieAlgebra& alg, int order);

// exp(1/2 * sum b_{2k} tr((ad X)^{2k})) truncated past total degree `order`,
// as a polynomial on the algebra (the symbol of the Duflo operator)
PolyQ j_half_symbol(const LieAlgebra& alg, int order);

// Applies j^{1/2}(eps d) to F: a symbol monomial of degree t acts as a
// constant-coefficient derivative carrying eps^t, so the output grading only
// moves in even steps. Truncated at eps^order.
EpsPolyQ duflo_map(const LieAlgebra& alg, const EpsPolyQ& F, int order);

// Coadjoint action of the basis element e_i on polynomials over the dual:
// F -> sum_{j,k} c_{ij}^k xi_k dF/dxi_j. A polynomial is invariant when
// every basis element annihilates it.
PolyQ coadjoint_action(const LieAlgebra& alg, int i, const PolyQ& F);
bool is_invariant(const LieAlgebra& alg, const PolyQ& F);

}  // namespace kgc
