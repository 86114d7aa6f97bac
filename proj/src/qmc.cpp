#include "kgc/qmc.hpp"

#include <stdexcept>

namespace kgc {

namespace {

struct DirSpec {
  int degree;              // s
  std::uint32_t poly;      // interior coefficient bits a_1..a_{s-1}
  std::uint32_t init[6];   // m_1..m_s
};

// dimension 1 is the van der Corput sequence; the rest pair distinct
// primitive polynomials with valid initial values
constexpr DirSpec kDirections[Sobol::max_dim - 1] = {
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 1, 3, 3, 9, 7}},
    {6, 13, {1, 1, 5, 13, 3, 1}},
    {6, 16, {1, 3, 1, 7, 17, 51}},
};

}  // namespace

Sobol::Sobol(int dim) : dim_(dim) {
  if (dim < 1 || dim > max_dim) throw std::invalid_argument("Sobol: dimension out of range");
  // first dimension: v_k = 2^{32-k}
  for (int k = 0; k < 32; ++k) v_[0][k] = 1u << (31 - k);
  for (int d = 1; d < dim; ++d) {
    const DirSpec& spec = kDirections[d - 1];
    const int s = spec.degree;
    std::uint32_t m[32];
    for (int k = 0; k < s; ++k) m[k] = spec.init[k];
    for (int k = s; k < 32; ++k) {
      std::uint32_t x = m[k - s] ^ (m[k - s] << s);
      for (int t = 1; t < s; ++t)
        if (spec.poly >> (s - 1 - t) & 1u) x ^= m[k - t] << t;
      m[k] = x;
    }
    for (int k = 0; k < 32; ++k) v_[d][k] = m[k] << (31 - k);
  }
}

std::uint32_t Sobol::raw(std::uint64_t index, int d) const {
  std::uint64_t gray = index ^ (index >> 1);
  std::uint32_t x = 0;
  for (int k = 0; gray; ++k, gray >>= 1)
    if (gray & 1u) x ^= v_[d][k];
  return x;
}

void Sobol::point(std::uint64_t index, const std::uint32_t* shift, double* out) const {
  for (int d = 0; d < dim_; ++d) {
    std::uint32_t x = raw(index, d);
    if (shift) x ^= shift[d];
    out[d] = (static_cast<double>(x) + 0.5) * 0x1p-32;
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<std::uint32_t> derive_shift(std::uint64_t seed, int replicate, int dim) {
  std::uint64_t state = seed * 0x9e3779b97f4a7c15ull + 0xda442d24ull * (replicate + 1);
  std::vector<std::uint32_t> shift(dim);
  for (int d = 0; d < dim; ++d) shift[d] = static_cast<std::uint32_t>(splitmix64(state) >> 32);
  return shift;
}

double pairwise_sum(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> level(xs);
  std::vector<double> next;
  while (level.size() > 1) {
    next.clear();
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
    if (level.size() % 2) next.push_back(level.back());
    level.swap(next);
  }
  return level[0];
}

}  // namespace kgc
