#pragma once

#include <string>
#include <vector>

#include "kgc/poly.hpp"
#include "kgc/subalgebra.hpp"
#include "kgc/weights.hpp"

namespace kgc {

// An eps-graded series whose coefficients are polynomials in chart
// coordinates (trace symbols of ad-words). The snapped part keeps only
// contributions whose weights snapped to rationals; the numeric part keeps
// everything at measured values, with per-monomial error bars in sigma.
struct WheelSeries {
  EpsPolyQ snapped;
  EpsPolyD numeric;
  EpsPolyD sigma;
  bool exact = true;
  std::vector<std::string> missing;
};

struct WheelFunctions {
  WheelSeries A, B, J;
};

// Pure-wheel series on the chart from quadrant weights: A collects wheels
// whose ground leg sits on the vertical wall, B the horizontal wall, and J
// is defined by A J^{1/2} = B j^{1/2} with j the full-algebra Duflo series.
// Variables are the q coordinates of X; order <= 2 (single two-wheels).
WheelFunctions wheel_functions(const SubalgebraData& sub, int order,
                               const WeightSourceOptions& opt,
                               WeightCache* cache = nullptr);

// Exponential symbol of the two-color product on a symmetric pair:
// mu1(e^X, e^Y) = E(X,Y) e^{X+Y} with X, Y in q. Variables are the q
// coordinates of X followed by those of Y; order <= 2. Requires the
// symmetric_pair flag and a vanishing character.
WheelSeries e_symbol(const SubalgebraData& sub, int order,
                     const WeightSourceOptions& opt,
                     WeightCache* cache = nullptr);

}  // namespace kgc
