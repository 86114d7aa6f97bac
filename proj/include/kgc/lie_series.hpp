#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgc/graph.hpp"
#include "kgc/rational.hpp"

namespace kgc {

// Free Lie series on two generators X, Y in the Lyndon word basis.
// Words are strings over {'X','Y'}; the basis element of a Lyndon word is its
// standard (right-factor) bracketing.
struct LieSeries {
  int order = 0;                  // coefficients kept for word lengths <= order
  std::map<std::string, Rat> coeff;  // keyed by Lyndon word

  Rat at(const std::string& w) const {
    auto it = coeff.find(w);
    return it == coeff.end() ? Rat(0) : it->second;
  }
  void add(const std::string& w, const Rat& c);
  LieSeries& operator+=(const LieSeries& o);
  LieSeries& operator-=(const LieSeries& o);
  LieSeries scaled(const Rat& c) const;
  bool operator==(const LieSeries& o) const { return coeff == o.coeff; }
};

// Lyndon words over {X,Y} of length 1..order, sorted by length then lex.
std::vector<std::string> lyndon_basis(int order);

bool is_lyndon(const std::string& w);

// Standard factorization w = uv, v the longest proper Lyndon suffix.
std::pair<std::string, std::string> lyndon_factorize(const std::string& w);

// Free associative algebra on X,Y: word -> coefficient.  Used internally and
// by tests as an independent route for bracket identities.
using AssocPoly = std::map<std::string, Rat>;

AssocPoly assoc_of_lyndon(const std::string& w);  // basis element expanded
AssocPoly assoc_bracket(const AssocPoly& a, const AssocPoly& b);
// Decompose a Lie element given in the associative algebra; throws if the
// input is not a Lie element (detected by triangularity failure).
std::map<std::string, Rat> lyndon_coordinates(const AssocPoly& p);

LieSeries bracket(const LieSeries& a, const LieSeries& b, int order);

// substitute (X,Y) -> (sx*X', sy*Y') with swap when swap_args, exact
LieSeries substituted(const LieSeries& z, int sx, int sy, bool swap_args, int order);

// Baker-Campbell-Hausdorff series via the Dynkin formula, exact, order <= 8.
LieSeries dynkin_bch(int order);

// weight of a single graph as fed into the BCH assembly: either an exact
// snapped rational or a numeric estimate with a standard error
struct GraphWeight {
  bool exact = false;
  Rat snapped = 0;
  double value = 0.0;
  double std_error = 0.0;
};

// returns nullopt when no weight is available for the graph
using GraphWeightFn = std::function<std::optional<GraphWeight>(const KGraph&)>;

struct BchAssembly {
  LieSeries series;
  std::map<std::string, double> std_error;   // per Lyndon word, 0 omitted
  std::vector<std::string> noise_dominated;  // words where the error bar
                                             // exceeds half the residual
                                             // against the Dynkin series
};

BchAssembly kontsevich_bch(int order, const GraphWeightFn& weights);

// Bracket word of a LieSimple graph: ground 1 -> X, ground 2 -> Y, vertex
// [first slot, second slot], read from the root.
LieSeries graph_symbol(const KGraph& g);

std::string lie_series_str(const LieSeries& s);  // human form
// lines "order;word;num/den;err"; err printed as 0 for exact coefficients
std::string lie_series_machine(const LieSeries& s,
                               const std::map<std::string, double>& err = {});

}  // namespace kgc
