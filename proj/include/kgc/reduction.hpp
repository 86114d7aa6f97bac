#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kgc/subalgebra.hpp"
#include "kgc/weights.hpp"

namespace kgc {

// Polynomial on the chart tensor an exterior word in the h* generators.
// Chart variables follow q_basis order, generators follow h_basis order;
// a word is a bit mask over the generators, kept in ascending slot order.
struct ExtPoly {
  int nvars = 0;
  int ngen = 0;
  std::map<std::uint64_t, PolyQ> terms;  // word mask -> coefficient

  ExtPoly() = default;
  ExtPoly(int nv, int ng) : nvars(nv), ngen(ng) {}
  static ExtPoly scalar(int ng, PolyQ p);

  bool is_zero() const { return terms.empty(); }
  int ext_degree() const;  // largest word length with a nonzero coefficient

  void add_term(std::uint64_t mask, const PolyQ& p);
  ExtPoly& operator+=(const ExtPoly& o);
  ExtPoly& operator-=(const ExtPoly& o);
  ExtPoly scaled(const Rat& c) const;
  ExtPoly wedge(const ExtPoly& o) const;

  ExtPoly theta(int gen) const;  // left exterior multiplication
  ExtPoly iota(int gen) const;   // left contraction
  ExtPoly poly_scaled(const PolyQ& p) const;

  bool operator==(const ExtPoly& o) const {
    return nvars == o.nvars && ngen == o.ngen && terms == o.terms;
  }
};

// eps-graded chart element
struct ReductionElement {
  int nvars = 0;
  int ngen = 0;
  std::map<int, ExtPoly> parts;

  ReductionElement() = default;
  ReductionElement(int nv, int ng) : nvars(nv), ngen(ng) {}
  static ReductionElement scalar(const SubalgebraData& sub, PolyQ p);

  void add(int eps, const ExtPoly& p);
  ExtPoly at(int eps) const;
  bool is_zero() const;
  ReductionElement& operator+=(const ReductionElement& o);
  ReductionElement& operator-=(const ReductionElement& o);
  bool operator==(const ReductionElement& o) const;
};

// one line per eps layer: `eps^k : <poly> (x) <wedge word>`
std::string print_reduction_element(const ReductionElement& r,
                                    const SubalgebraData& sub);

// Action of the h generator (parent index) on chart polynomials: the
// derivation sending a coordinate function to the chart restriction of its
// bracket with the generator.
PolyQ h_action(const SubalgebraData& sub, int h_parent_index, const PolyQ& F);

// Chevalley-Eilenberg differential of that action on chart-valued forms.
ExtPoly d_ce(const SubalgebraData& sub, const ExtPoly& F);

// The colored graph operator on the chart. Ground edges with tangent color
// differentiate the argument's polynomial part in their q-direction; normal
// ones contract the exterior word. Every infinity edge multiplies by its h*
// generator on the left (vertex-then-slot order) and flips the overall sign
// once. Vertex factors are differentiated before restriction to the chart.
ExtPoly apply_colored(const KGraph& g, const SubalgebraData& sub,
                      const std::vector<const ExtPoly*>& args);

// The differential's graph families at n aerial vertices, every admissible
// tangent/normal coloring, one infinity edge in a second slot: chains whose
// last edge escapes, cycles with one escaping spoke, and cycles carrying a
// chain that escapes.
std::vector<KGraph> mu0_graphs(int n);

struct Mu0Result {
  ReductionElement value;
  bool exact = true;
  std::vector<std::string> missing;
  std::vector<std::string> contributing;  // graph ids with nonzero terms
};

// order <= 3
Mu0Result mu0_apply(const SubalgebraData& sub, const ReductionElement& F,
                    int order, WeightSource& ws);

struct ReductionBasis {
  std::vector<ReductionElement> basis;
  bool exact = true;
  std::vector<std::string> missing;
};

// Basis of the exterior-degree-0 kernel of the differential among chart
// polynomials of degree <= degree_cap, truncated at the given eps order
// (order <= 2: the even layer vanishes identically, so the kernel is the
// kernel of the eps^1 differential and needs no correction tails).
ReductionBasis reduction_basis(const SubalgebraData& sub, int order,
                               int degree_cap, WeightSource& ws);

struct CfResult {
  ReductionElement value;
  bool exact = true;
  std::vector<std::string> missing;
  // differential residuals of the inputs at the working order; nonzero
  // residuals mean the product left the intended domain
  ReductionElement residual_f, residual_g;
};

// Two-color product of chart elements, order <= 2.
CfResult cf_star(const SubalgebraData& sub, const ReductionElement& F,
                 const ReductionElement& G, int order, WeightSource& ws);

}  // namespace kgc
