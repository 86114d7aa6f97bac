#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgc/lie_algebra.hpp"

namespace kgc {

// Reduction data: a subalgebra h of the parent picked out by basis indices,
// the complementary indices q spanning the chart, and a character lambda on
// h. Chart functions live on the affine slice of the dual where every
// h-coordinate is frozen at its lambda value.
struct SubalgebraData {
  LieAlgebra parent;
  std::vector<int> h_basis;
  std::vector<int> q_basis;
  std::map<int, Rat> lambda;  // keyed by parent index, h indices only

  // recomputed from the structure constants at construction
  bool h_stable_complement = false;  // [h, q] stays in span(q)
  bool symmetric_pair = false;       // stable and [q, q] lands in span(h)

  int hdim() const { return static_cast<int>(h_basis.size()); }
  int qdim() const { return static_cast<int>(q_basis.size()); }

  // position of a parent index inside h_basis / q_basis, -1 when absent
  int h_slot(int parent_index) const;
  int q_slot(int parent_index) const;
  bool in_h(int parent_index) const { return h_slot(parent_index) >= 0; }

  // value of the parent coordinate on the chart: the q-coordinates are
  // the chart variables, the h-coordinates are the lambda constants
  Rat lambda_value(int parent_index) const;  // 0 when unset; throws on q

  // a parent-basis vector as a chart polynomial in the q-coordinates
  PolyQ chart_linear(const SparseVec& v) const;
};

// Verifies h is closed under the bracket, lambda kills [h,h], and h with
// the complement partitions the basis; fills q_basis in index order and the
// two flags. Throws std::invalid_argument naming the violated rule.
SubalgebraData make_subalgebra(LieAlgebra parent, std::vector<int> h,
                               std::map<int, Rat> lambda = {});

// Extends the algebra grammar with trailing clauses
//   h=<i>,<j>,...; lambda=<i>:<p/q>,...; flags=...
// Indices are 0-based basis positions; q and the flags are recomputed (a
// flags clause is checked against the recomputed values).
SubalgebraData parse_subalgebra(const std::string& text);
std::string serialize_subalgebra(const SubalgebraData& s);

// trivial-<algebra>, heis-z, heis-z0, heis-polarization, sl2-cartan,
// sl2-borel, sl2-iwasawa, double-<algebra>, double-plus-<algebra>
std::optional<SubalgebraData> subalgebra_preset(const std::string& name);

// The double g x g written in the basis K_i = (e_i, e_i), P_i = (e_i, -e_i):
// [K_i,K_j] = c_ij^k K_k, [K_i,P_j] = c_ij^k P_k, [P_i,P_j] = c_ij^k K_k.
// Names K.<n>, P.<n>; K block first.
LieAlgebra double_kp_algebra(const LieAlgebra& g);

// Same double in the basis K_i, G_i = (2 e_i, 0): [K_i,G_j] = c_ij^k G_k,
// [G_i,G_j] = 2 c_ij^k G_k.
LieAlgebra double_kg_algebra(const LieAlgebra& g);

}  // namespace kgc
