#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgc/graph.hpp"
#include "kgc/lie_series.hpp"
#include "kgc/rational.hpp"

namespace kgc {

// Color interpretation of the edges when the angle rows are built.
enum class ColorMode { Plain, TwoColor, FourColor };

std::string color_mode_name(ColorMode m);

enum class ChartKind {
  // m = 2, ground fixed at the two chosen reals. Aerial points are
  // parameterized by the pair of angles they subtend at the ground points,
  // which makes the one-vertex integrand linear and QMC-exact.
  HalfPlaneAngles,
  // m = 2, same gauge, x = tan(pi(u-1/2)), y = v/(1-v). Kept as an
  // independent parameterization for the invariance battery.
  HalfPlaneTan,
  // m = 1, ground at 0, leftover dilation killed by putting the first
  // aerial point on the unit semicircle.
  HalfPlaneOne,
  // first quadrant modulo dilations: marked points on the axes with the
  // first one at distance 1, aerial points in polar coordinates.
  Quadrant,
};

// Position of one vertex and its partial derivatives with respect to the
// chart parameters it depends on, as sparse {param, dx/dc, dy/dc} rows.
struct VertexJet {
  double x = 0, y = 0;
  std::vector<std::array<double, 3>> d;
};

class Chart {
 public:
  // mv marked points sit on the vertical axis (Quadrant only); the graph's
  // last mv ground indices map there, the first m - mv to the horizontal one.
  Chart(ChartKind kind, int n, int m, int mv = 0);

  // Ground positions for the half-plane charts (must be increasing).
  void set_ground(std::vector<double> g);

  ChartKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  int vertical_count() const { return mv_; }

  // cube points to vertex jets; cube has dimension() entries in (0,1)
  void eval(const double* cube, std::vector<VertexJet>& aerial,
            std::vector<VertexJet>& ground) const;

 private:
  ChartKind kind_;
  int n_, m_, mv_, dim_;
  std::vector<double> ground_;
};

ChartKind default_chart(const KGraph& g, ColorMode mode);

struct WeightEstimate {
  std::string graph_id;
  double value = 0;
  double std_error = 0;
  std::int64_t samples = 0;  // total across replicates
  std::uint64_t seed = 0;
  std::optional<Rat> snapped;
  int snap_candidates = -1;  // -1 until snapping is attempted
  bool converged = true;
  std::int64_t rejected = 0;
};

struct IntegrateOptions {
  std::int64_t samples = 1 << 14;  // per replicate; rounded up to a power of 2
  std::uint64_t seed = 1;
  int replicates = 16;
  double rejection_floor = 1e-9;
  std::optional<ChartKind> chart;  // default_chart(g, mode) when absent
  std::vector<double> ground;      // ground override for half-plane charts
  int quadrant_vertical = 0;       // mv for quadrant charts
};

// Estimate of (2pi)^-E times the integral of the wedge of the edge angle
// forms over the gauge-fixed configuration space, edges in declaration order,
// infinity edges excluded from the form. Error bars come from independent
// scramblings; converged reports whether the error kept shrinking between
// the N/4, N/2 and N sample checkpoints.
WeightEstimate integrate_weight(const KGraph& g, ColorMode mode,
                                const IntegrateOptions& opt = {});

// Snap to the unique rational with denominator <= den_bound within 3
// std_error; when that window holds several candidates the snap still
// happens if exactly one of them survives at 1 std_error and it is the
// lowest-denominator candidate of the wide window (so a large-denominator
// neighbor sitting alone near an off-center estimate never wins).
// snap_candidates reports the wide-window count (0 = empty, >= 2 = crowded).
WeightEstimate snap_rational(WeightEstimate w, int den_bound);

inline constexpr int weight_convention_version = 1;

// One line per record: graph_id mode version value std_error samples seed.
// Lines are append-merged: duplicates of a key combine by inverse variance
// on load. Records from other convention versions are counted and ignored.
class WeightCache {
 public:
  explicit WeightCache(std::string dir);  // empty dir disables the cache
  static std::string env_dir();           // $KGC_CACHE_DIR or ""

  bool enabled() const { return !dir_.empty(); }
  const std::string& dir() const { return dir_; }
  std::optional<WeightEstimate> get(const std::string& graph_id,
                                    const std::string& mode) const;
  void put(const WeightEstimate& w, const std::string& mode);
  int stale_entries() const { return stale_; }

 private:
  std::string dir_, file_;
  std::map<std::pair<std::string, std::string>, WeightEstimate> entries_;
  int stale_ = 0;
};

WeightEstimate merge_estimates(const WeightEstimate& a, const WeightEstimate& b);

struct WeightSourceOptions {
  IntegrateOptions integrate;
  int den_bound = 48;       // 0 disables snapping
  bool cache_only = false;  // never integrate; cache misses return nullopt
  bool factorize = true;    // evaluate half-plane superpositions per component
  // when > integrate.samples, unsnapped estimates earn independently seeded
  // reruns of doubling size (merged by inverse variance) up to this many
  // samples per replicate
  std::int64_t max_samples = 0;
};

// Lazy weight provider: canonical id -> cache lookup -> integration -> snap,
// splitting disconnected graphs into their aerial components first.
class WeightSource {
 public:
  WeightSource(ColorMode mode, WeightSourceOptions opt, WeightCache* cache = nullptr);

  std::optional<GraphWeight> weight(const KGraph& g);
  std::optional<WeightEstimate> estimate(const KGraph& g);
  GraphWeightFn fn();  // adapter for the series assemblers

  const std::vector<std::string>& misses() const { return misses_; }

 private:
  WeightEstimate evaluate(const KGraph& g);

  ColorMode mode_;
  WeightSourceOptions opt_;
  WeightCache* cache_;
  std::map<std::string, WeightEstimate> memo_;
  std::vector<std::string> misses_;
};

}  // namespace kgc
