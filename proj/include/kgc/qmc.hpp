#pragma once

#include <cstdint>
#include <vector>

namespace kgc {

// Sobol sequence in up to 16 dimensions with optional digital shift.
// Direction numbers are built from distinct primitive polynomials over
// GF(2); initial values satisfy the standard validity constraints
// (m_k odd, m_k < 2^k), which the unit tests assert via the dyadic
// equidistribution property of every 1-d projection.
class Sobol {
 public:
  static constexpr int max_dim = 16;

  explicit Sobol(int dim);

  int dim() const { return dim_; }

  std::uint32_t raw(std::uint64_t index, int d) const;  // unshifted stream

  // writes dim() coordinates of point `index`, xor-shifted per dimension,
  // mapped to the open interval (0,1) via cell midpoints
  void point(std::uint64_t index, const std::uint32_t* shift, double* out) const;

 private:
  int dim_;
  std::uint32_t v_[max_dim][32];
};

std::uint64_t splitmix64(std::uint64_t& state);

// per-dimension xor masks for one scrambling replicate
std::vector<std::uint32_t> derive_shift(std::uint64_t seed, int replicate, int dim);

// fixed-shape pairwise summation: result independent of any batching
double pairwise_sum(const std::vector<double>& xs);

}  // namespace kgc
