#include "kgc/wheels.hpp"

#include <stdexcept>

#include "kgc/graph.hpp"
#include "wheel_detail.hpp"

namespace kgc {

using wheel_detail::ad_chart;
using wheel_detail::pair_trace;
using wheel_detail::SeriesAccum;
using wheel_detail::to_double_poly;
using wheel_detail::two_wheel_colored;

WheelFunctions wheel_functions(const SubalgebraData& sub, int order,
                               const WeightSourceOptions& opt,
                               WeightCache* cache) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("pure wheel series computed through order 2");
  const int nv = sub.qdim();

  WeightSourceOptions vopt = opt, hopt = opt;
  vopt.integrate.chart = ChartKind::Quadrant;
  vopt.integrate.quadrant_vertical = 1;
  hopt.integrate.chart = ChartKind::Quadrant;
  hopt.integrate.quadrant_vertical = 0;
  WeightSource vertical(ColorMode::FourColor, vopt, cache);
  WeightSource horizontal(ColorMode::FourColor, hopt, cache);

  MatPoly adX = ad_chart(sub.parent, sub.q_basis, nv, 0);
  auto rows = [&](int c) -> const std::vector<int>& {
    return c > 0 ? sub.q_basis : sub.h_basis;
  };

  SeriesAccum accA(nv), accB(nv);
  if (order >= 2) {
    // 2^n/n!: 1/n! over labeled vertex assignments, times 2 per vertex
    // because the operator sums both orderings of a vertex's out-edge pair
    // and symbol and weight flip sign together under that swap.
    const Rat scale = rat(2, 1);
    for (int c1 : {+1, -1})
      for (int c2 : {+1, -1}) {
        PolyQ sym =
            pair_trace(adX, adX, rows(c2), rows(c1), nv).scaled(rat(1, 4));
        KGraph g = two_wheel_colored(1, 0, 0, c1, c2, +1);
        accA.tally(vertical, g, sym, scale);
        accB.tally(horizontal, g, sym, scale);
      }
  }

  WheelFunctions out;
  out.A = accA.finish(nv);
  out.B = accB.finish(nv);

  // J = (B/A)^2 j truncates to J2 = 2(B2 - A2) + tr((ad X)^2)/24
  PolyQ t2 = trace(mat_mul(adX, adX));
  out.J.snapped = EpsPolyQ(nv);
  out.J.numeric = EpsPolyD(nv);
  out.J.sigma = EpsPolyD(nv);
  out.J.snapped.add(0, PolyQ::constant(nv, 1));
  out.J.numeric.add(0, PolyD::constant(nv, 1.0));
  if (order >= 2) {
    PolyQ j2 = t2.scaled(rat(1, 24));
    PolyQ s = out.B.snapped.at(2) - out.A.snapped.at(2);
    out.J.snapped.add(2, s.scaled(2) + j2);
    PolyD nsum = out.B.numeric.at(2);
    nsum -= out.A.numeric.at(2);
    out.J.numeric.add(2, nsum.scaled(2.0) + to_double_poly(j2));
    PolyD ssum = out.B.sigma.at(2);
    ssum += out.A.sigma.at(2);
    out.J.sigma.add(2, ssum.scaled(2.0));
  }
  out.J.exact = out.A.exact && out.B.exact;
  out.J.missing = out.A.missing;
  out.J.missing.insert(out.J.missing.end(), out.B.missing.begin(),
                       out.B.missing.end());
  return out;
}

WheelSeries e_symbol(const SubalgebraData& sub, int order,
                     const WeightSourceOptions& opt, WeightCache* cache) {
  if (!sub.symmetric_pair)
    throw std::invalid_argument("exponential symbol needs a symmetric pair");
  for (const auto& [i, v] : sub.lambda)
    if (v != Rat(0))
      throw std::invalid_argument(
          "exponential symbol needs a vanishing character");
  if (order < 0 || order > 2)
    throw std::invalid_argument("exponential symbol computed through order 2");

  const int d = sub.qdim();
  const int nv = 2 * d;
  WeightSource ws(ColorMode::TwoColor, opt, cache);

  MatPoly adU[2] = {ad_chart(sub.parent, sub.q_basis, nv, 0),
                    ad_chart(sub.parent, sub.q_basis, nv, d)};
  auto rows = [&](int c) -> const std::vector<int>& {
    return c > 0 ? sub.q_basis : sub.h_basis;
  };

  SeriesAccum acc(nv);
  if (order >= 2) {
    const Rat scale = rat(2, 1);  // 2^n/n!, same vertex convention as above
    for (int p0 : {0, 1})
      for (int p1 : {0, 1})
        for (int c1 : {+1, -1})
          for (int c2 : {+1, -1}) {
            PolyQ sym = pair_trace(adU[p0], adU[p1], rows(c2), rows(c1), nv)
                            .scaled(rat(1, 4));
            acc.tally(ws, two_wheel_colored(2, p0, p1, c1, c2, 0), sym, scale);
          }
  }
  return acc.finish(nv);
}

}  // namespace kgc
