#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kgc/graph.hpp"  // ParseError
#include "kgc/poly.hpp"
#include "kgc/rational.hpp"

namespace kgc {

// sparse vector in the basis: index -> coefficient
using SparseVec = std::map<int, Rat>;

struct LieAlgebra {
  int dim = 0;
  std::vector<std::string> names;
  // structure constants for i < j only; antisymmetry is implicit
  std::map<std::pair<int, int>, SparseVec> structure;

  SparseVec bracket_basis(int i, int j) const;
  SparseVec bracket_vec(const SparseVec& u, const SparseVec& v) const;
  int index_of(const std::string& name) const;  // -1 when absent
  void set_bracket(int i, int j, SparseVec c);  // accepts any i != j
};

// throws with the offending triple in the message
void check_jacobi(const LieAlgebra& L);

// grammar: dim=<d>; basis=a,b,c; bracket a b = 1*c + -1/2*a; ...
LieAlgebra parse_algebra(const std::string& text);
std::string serialize_algebra(const LieAlgebra& L);

LieAlgebra abelian(int d);
LieAlgebra heisenberg3();  // [X,Y] = Z
LieAlgebra sl2();          // [H,X] = 2X, [H,Y] = -2Y, [X,Y] = H
LieAlgebra solvable4();    // [T,X] = X, [T,Y] = Y, [T,Z] = 2Z
LieAlgebra aff1();         // [T,X] = X

// names: abelian<d>, heisenberg3, sl2, solvable4, aff1, double-<name>
std::optional<LieAlgebra> algebra_preset(const std::string& name);

// g x g with componentwise bracket; names suffixed .1/.2
LieAlgebra double_algebra(const LieAlgebra& g);

using MatQ = std::vector<std::vector<Rat>>;
using MatPoly = std::vector<std::vector<PolyQ>>;

MatQ ad_matrix(const LieAlgebra& L, const SparseVec& u);
Rat trace(const MatQ& m);
MatQ mat_mul(const MatQ& a, const MatQ& b);

// ad of the generic element sum_i x_{offset+i} e_i, entries linear
// polynomials in nvars variables
MatPoly ad_generic(const LieAlgebra& L, int nvars, int offset);
PolyQ trace(const MatPoly& m);
MatPoly mat_mul(const MatPoly& a, const MatPoly& b);

}  // namespace kgc
