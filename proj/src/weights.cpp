#include "kgc/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kgc/angle.hpp"
#include "kgc/qmc.hpp"

namespace kgc {

namespace {

constexpr double kPi = std::numbers::pi;

struct FormEdge {
  int src = 0;
  Target tgt;
  int s1 = +1, s2 = 0;
};

// row-major e x e determinant, destroys the matrix
double det_destructive(std::vector<double>& m, int e) {
  double det = 1;
  for (int col = 0; col < e; ++col) {
    int piv = col;
    for (int r = col + 1; r < e; ++r)
      if (std::abs(m[r * e + col]) > std::abs(m[piv * e + col])) piv = r;
    if (m[piv * e + col] == 0) return 0;
    if (piv != col) {
      for (int c = col; c < e; ++c) std::swap(m[piv * e + c], m[col * e + c]);
      det = -det;
    }
    double lead = m[col * e + col];
    det *= lead;
    for (int r = col + 1; r < e; ++r) {
      double f = m[r * e + col] / lead;
      if (f == 0) continue;
      for (int c = col; c < e; ++c) m[r * e + c] -= f * m[col * e + c];
    }
  }
  return det;
}

double replicate_error(const std::vector<double>& means, double mu) {
  if (means.size() < 2) return 0;
  double var = 0;
  for (double v : means) var += (v - mu) * (v - mu);
  auto r = static_cast<double>(means.size());
  return std::sqrt(var / (r * (r - 1)));
}

}  // namespace

std::string color_mode_name(ColorMode m) {
  switch (m) {
    case ColorMode::Plain: return "plain";
    case ColorMode::TwoColor: return "two-color";
    case ColorMode::FourColor: return "four-color";
  }
  return "?";
}

Chart::Chart(ChartKind kind, int n, int m, int mv)
    : kind_(kind), n_(n), m_(m), mv_(mv), dim_(0) {
  if (n < 0 || m < 0 || mv < 0 || mv > m)
    throw std::invalid_argument("chart: bad vertex counts");
  switch (kind_) {
    case ChartKind::HalfPlaneAngles:
    case ChartKind::HalfPlaneTan:
      if (m != 2) throw std::invalid_argument("half-plane charts expect two ground points");
      if (mv != 0) throw std::invalid_argument("vertical points only exist in quadrant charts");
      ground_ = {0.0, 1.0};
      dim_ = 2 * n;
      break;
    case ChartKind::HalfPlaneOne:
      if (m != 1) throw std::invalid_argument("this chart expects one ground point");
      if (mv != 0) throw std::invalid_argument("vertical points only exist in quadrant charts");
      if (n < 1) throw std::invalid_argument("need an aerial point to absorb the dilation");
      ground_ = {0.0};
      dim_ = 2 * n - 1;
      break;
    case ChartKind::Quadrant:
      if (m < 1) throw std::invalid_argument("need a marked point to absorb the dilation");
      dim_ = 2 * n + m - 1;
      break;
  }
}

void Chart::set_ground(std::vector<double> g) {
  if (kind_ != ChartKind::HalfPlaneAngles && kind_ != ChartKind::HalfPlaneTan)
    throw std::invalid_argument("ground positions are fixed for this chart");
  if (g.size() != 2 || g[0] >= g[1])
    throw std::invalid_argument("ground positions must be two increasing reals");
  ground_ = std::move(g);
}

void Chart::eval(const double* c, std::vector<VertexJet>& aerial,
                 std::vector<VertexJet>& ground) const {
  aerial.resize(n_);
  ground.resize(m_);
  for (auto& j : aerial) j.d.clear();
  for (auto& j : ground) j.d.clear();

  switch (kind_) {
    case ChartKind::HalfPlaneAngles: {
      double a = ground_[0], len = ground_[1] - ground_[0];
      ground[0].x = ground_[0];
      ground[1].x = ground_[1];
      ground[0].y = ground[1].y = 0;
      for (int k = 0; k < n_; ++k) {
        double u = c[2 * k], v = c[2 * k + 1];
        double beta = kPi * v, alpha = beta * u;
        double s = std::sin(beta - alpha);
        double r = std::sin(beta) / s;
        double ca = std::cos(alpha), sa = std::sin(alpha);
        double dr_da = std::sin(beta) * std::cos(beta - alpha) / (s * s);
        double dr_db = -std::sin(alpha) / (s * s);
        double qax = dr_da * ca - r * sa, qay = dr_da * sa + r * ca;
        double qbx = dr_db * ca, qby = dr_db * sa;
        double dux = beta * qax, duy = beta * qay;
        double dvx = kPi * (u * qax + qbx), dvy = kPi * (u * qay + qby);
        aerial[k].x = a + len * r * ca;
        aerial[k].y = len * r * sa;
        aerial[k].d.push_back({2.0 * k, len * dux, len * duy});
        aerial[k].d.push_back({2.0 * k + 1, len * dvx, len * dvy});
      }
      break;
    }
    case ChartKind::HalfPlaneTan: {
      ground[0].x = ground_[0];
      ground[1].x = ground_[1];
      ground[0].y = ground[1].y = 0;
      for (int k = 0; k < n_; ++k) {
        double u = c[2 * k], v = c[2 * k + 1];
        double x = std::tan(kPi * (u - 0.5));
        double om = 1 - v;
        aerial[k].x = x;
        aerial[k].y = v / om;
        aerial[k].d.push_back({2.0 * k, kPi * (1 + x * x), 0});
        aerial[k].d.push_back({2.0 * k + 1, 0, 1 / (om * om)});
      }
      break;
    }
    case ChartKind::HalfPlaneOne: {
      ground[0].x = ground[0].y = 0;
      double th = kPi * c[0];
      aerial[0].x = std::cos(th);
      aerial[0].y = std::sin(th);
      aerial[0].d.push_back({0.0, -kPi * aerial[0].y, kPi * aerial[0].x});
      for (int k = 1; k < n_; ++k) {
        double u = c[2 * k - 1], v = c[2 * k];
        double th2 = kPi * u, om = 1 - v, r = v / om;
        double ct = std::cos(th2), st = std::sin(th2);
        aerial[k].x = r * ct;
        aerial[k].y = r * st;
        aerial[k].d.push_back({2.0 * k - 1, -kPi * r * st, kPi * r * ct});
        aerial[k].d.push_back({2.0 * k, ct / (om * om), st / (om * om)});
      }
      break;
    }
    case ChartKind::Quadrant: {
      for (int k = 0; k < n_; ++k) {
        double u = c[2 * k], v = c[2 * k + 1];
        double th = 0.5 * kPi * u, om = 1 - v, r = v / om;
        double ct = std::cos(th), st = std::sin(th);
        aerial[k].x = r * ct;
        aerial[k].y = r * st;
        aerial[k].d.push_back({2.0 * k, -0.5 * kPi * r * st, 0.5 * kPi * r * ct});
        aerial[k].d.push_back({2.0 * k + 1, ct / (om * om), st / (om * om)});
      }
      // marked points: the horizontal group then the vertical one, each
      // ordered increasing; the very first point absorbs the dilation
      int mh = m_ - mv_;
      int par = 2 * n_;
      std::vector<std::array<double, 2>> acc;  // {param, d increment}
      double pos = 0;
      for (int j = 0; j < mh; ++j) {
        if (j == 0) {
          pos = 1;
        } else {
          double v = c[par], om = 1 - v;
          pos += v / om;
          acc.push_back({static_cast<double>(par), 1 / (om * om)});
          ++par;
        }
        ground[j].x = pos;
        ground[j].y = 0;
        for (auto& [p, dr] : acc) ground[j].d.push_back({p, dr, 0});
      }
      acc.clear();
      pos = 0;
      for (int j = 0; j < mv_; ++j) {
        if (j == 0 && mh == 0) {
          pos = 1;
        } else {
          double v = c[par], om = 1 - v;
          pos += v / om;
          acc.push_back({static_cast<double>(par), 1 / (om * om)});
          ++par;
        }
        ground[mh + j].x = 0;
        ground[mh + j].y = pos;
        for (auto& [p, dr] : acc) ground[mh + j].d.push_back({p, 0, dr});
      }
      break;
    }
  }
}

ChartKind default_chart(const KGraph& g, ColorMode mode) {
  if (mode == ColorMode::FourColor) return ChartKind::Quadrant;
  if (g.m == 2) return ChartKind::HalfPlaneAngles;
  if (g.m == 1) return ChartKind::HalfPlaneOne;
  throw std::invalid_argument("no default chart for " + std::to_string(g.m) +
                              " ground points");
}

WeightEstimate integrate_weight(const KGraph& g, ColorMode mode,
                                const IntegrateOptions& opt) {
  check_admissible(g);
  if (mode == ColorMode::Plain && g.colored())
    throw std::invalid_argument("plain mode on a colored graph");
  if (mode != ColorMode::Plain && !g.colored())
    throw std::invalid_argument(color_mode_name(mode) + " mode needs edge colors");

  ChartKind ck = opt.chart ? *opt.chart : default_chart(g, mode);
  Chart chart(ck, g.n, g.m, ck == ChartKind::Quadrant ? opt.quadrant_vertical : 0);
  if (!opt.ground.empty()) chart.set_ground(opt.ground);
  int mh = g.m - chart.vertical_count();

  WeightEstimate out;
  out.graph_id = canonical_id(g);
  out.seed = opt.seed;

  std::vector<FormEdge> edges;
  bool structurally_zero = false;
  for (int e = 0; e < g.edge_count(); ++e) {
    Target t = g.target(e);
    if (t.kind == TargetKind::Infinity) continue;  // not part of the form
    FormEdge fe;
    fe.src = e / 2;
    fe.tgt = t;
    if (g.colored()) {
      fe.s1 = g.color(e).s1;
      fe.s2 = g.color(e).s2;
    }
    if (mode == ColorMode::FourColor && fe.s2 == 0)
      throw std::invalid_argument("four-color mode needs a second sign on every edge");
    if (t.kind == TargetKind::Ground) {
      // a normal-colored leg on its own axis carries the zero form
      if (mode == ColorMode::TwoColor && fe.s1 == -1) structurally_zero = true;
      if (mode == ColorMode::FourColor) {
        if (t.index < mh && fe.s1 == -1) structurally_zero = true;
        if (t.index >= mh && fe.s2 == -1) structurally_zero = true;
      }
    }
    edges.push_back(fe);
  }

  int ecount = static_cast<int>(edges.size());
  int dim = chart.dimension();
  if (ecount != dim)
    throw std::invalid_argument("dimension mismatch: " + std::to_string(ecount) +
                                " form edges vs " + std::to_string(dim) +
                                " chart parameters");
  if (structurally_zero) return out;  // exact zero, no samples drawn
  if (dim == 0) {
    out.value = 1;  // empty wedge over a point
    return out;
  }
  if (dim > Sobol::max_dim)
    throw std::invalid_argument("integration dimension " + std::to_string(dim) +
                                " exceeds the sampler's limit of " +
                                std::to_string(Sobol::max_dim));

  std::int64_t n = 64;
  while (n < opt.samples) n <<= 1;
  const int reps = std::max(1, opt.replicates);
  const double norm = std::pow(2 * kPi, -ecount);
  const double floor2 = opt.rejection_floor * opt.rejection_floor;

  Sobol sobol(dim);
  std::vector<VertexJet> aer, grd;
  std::vector<double> cube(dim), mat(ecount * dim), vals(n);
  const std::array<std::int64_t, 3> cps = {n / 4, n / 2, n};
  std::array<std::vector<double>, 3> cp_means;

  for (int r = 0; r < reps; ++r) {
    auto shift = derive_shift(opt.seed, r, dim);
    for (std::int64_t i = 0; i < n; ++i) {
      sobol.point(static_cast<std::uint64_t>(i), shift.data(), cube.data());
      chart.eval(cube.data(), aer, grd);
      bool reject = false;
      for (int a = 0; a < g.n && !reject; ++a) {
        for (int b = a + 1; b < g.n && !reject; ++b) {
          double dx = aer[a].x - aer[b].x, dy = aer[a].y - aer[b].y;
          reject = dx * dx + dy * dy < floor2;
        }
        for (int b = 0; b < g.m && !reject; ++b) {
          double dx = aer[a].x - grd[b].x, dy = aer[a].y - grd[b].y;
          reject = dx * dx + dy * dy < floor2;
        }
      }
      if (reject) {
        ++out.rejected;
        vals[i] = 0;
        continue;
      }
      std::fill(mat.begin(), mat.end(), 0.0);
      for (int e = 0; e < ecount; ++e) {
        const FormEdge& fe = edges[e];
        const VertexJet& s = aer[fe.src];
        const VertexJet& t = fe.tgt.kind == TargetKind::Aerial ? aer[fe.tgt.index]
                                                               : grd[fe.tgt.index];
        std::complex<double> ps(s.x, s.y), pt(t.x, t.y);
        AngleGrad ag = mode == ColorMode::Plain ? angle_half(ps, pt)
                       : mode == ColorMode::TwoColor
                           ? angle_two(ps, pt, fe.s1)
                           : angle_four(ps, pt, fe.s1, fe.s2);
        double* row = &mat[static_cast<std::size_t>(e) * dim];
        for (const auto& [p, dx, dy] : s.d)
          row[static_cast<int>(p)] += ag.dpx * dx + ag.dpy * dy;
        for (const auto& [p, dx, dy] : t.d)
          row[static_cast<int>(p)] += ag.dqx * dx + ag.dqy * dy;
      }
      vals[i] = norm * det_destructive(mat, ecount);
    }
    for (int ci = 0; ci < 3; ++ci) {
      std::vector<double> prefix(vals.begin(), vals.begin() + cps[ci]);
      cp_means[ci].push_back(pairwise_sum(prefix) / static_cast<double>(cps[ci]));
    }
  }

  std::array<double, 3> mu, err;
  for (int ci = 0; ci < 3; ++ci) {
    mu[ci] = pairwise_sum(cp_means[ci]) / static_cast<double>(reps);
    err[ci] = replicate_error(cp_means[ci], mu[ci]);
  }
  out.value = mu[2];
  out.std_error = err[2];
  out.samples = n * reps;
  out.converged = err[2] <= 1e-12 || err[2] <= 0.9 * err[1];
  return out;
}

WeightEstimate snap_rational(WeightEstimate w, int den_bound) {
  w.snapped.reset();
  w.snap_candidates = 0;
  if (den_bound <= 0) return w;

  if (w.std_error == 0) {
    Rat r(w.value);  // doubles are dyadic, so this is exact
    if (boost::multiprecision::denominator(r) <= Int(den_bound)) {
      w.snapped = r;
      w.snap_candidates = 1;
    }
    return w;
  }

  auto collect = [&](double radius) {
    std::set<Rat> cands;
    double lo = w.value - radius, hi = w.value + radius;
    for (int q = 1; q <= den_bound; ++q) {
      auto pl = static_cast<long long>(std::ceil(lo * q - 1e-12));
      auto ph = static_cast<long long>(std::floor(hi * q + 1e-12));
      for (long long p = pl; p <= ph; ++p) cands.insert(rat(p, q));
    }
    return cands;
  };

  // guard against absurdly wide windows: report "crowded" without enumerating
  if (6.0 * w.std_error * den_bound > 4096) {
    w.snap_candidates = den_bound;
    return w;
  }

  auto wide = collect(3 * w.std_error);
  w.snap_candidates = static_cast<int>(wide.size());
  if (wide.size() == 1) {
    w.snapped = *wide.begin();
    return w;
  }
  if (wide.empty()) return w;

  // Crowded window. A lone candidate within one std_error is still accepted,
  // but only when it is also the simplest candidate in sight: an estimate a
  // couple of sigma off-center can otherwise park a spurious large-denominator
  // neighbor (4/47 next to 1/12) alone inside the inner window.
  Int minden = 0;
  for (const auto& r : wide) {
    Int d = boost::multiprecision::denominator(r);
    if (minden == 0 || d < minden) minden = d;
  }
  auto narrow = collect(w.std_error);
  if (narrow.size() == 1 &&
      boost::multiprecision::denominator(*narrow.begin()) == minden)
    w.snapped = *narrow.begin();
  return w;
}

WeightCache::WeightCache(std::string dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  std::filesystem::create_directories(dir_);
  file_ = dir_ + "/weights.cache";
  std::ifstream in(file_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    WeightEstimate w;
    std::string mode;
    int version = 0;
    if (!(ls >> w.graph_id >> mode >> version >> w.value >> w.std_error >>
          w.samples >> w.seed)) {
      ++stale_;
      continue;
    }
    if (version != weight_convention_version) {
      ++stale_;
      continue;
    }
    auto key = std::make_pair(w.graph_id, mode);
    auto it = entries_.find(key);
    if (it == entries_.end())
      entries_.emplace(key, w);
    else
      it->second = merge_estimates(it->second, w);
  }
}

std::string WeightCache::env_dir() {
  const char* d = std::getenv("KGC_CACHE_DIR");
  return d ? d : "";
}

std::optional<WeightEstimate> WeightCache::get(const std::string& graph_id,
                                               const std::string& mode) const {
  auto it = entries_.find({graph_id, mode});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void WeightCache::put(const WeightEstimate& w, const std::string& mode) {
  if (!enabled()) return;
  auto key = std::make_pair(w.graph_id, mode);
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.seed == w.seed &&
      it->second.samples == w.samples && it->second.value == w.value)
    return;  // identical run, nothing new to merge
  if (it == entries_.end())
    entries_.emplace(key, w);
  else
    it->second = merge_estimates(it->second, w);
  std::ofstream outf(file_, std::ios::app);
  outf.precision(17);
  outf << w.graph_id << ' ' << mode << ' ' << weight_convention_version << ' '
       << w.value << ' ' << w.std_error << ' ' << w.samples << ' ' << w.seed
       << '\n';
}

WeightEstimate merge_estimates(const WeightEstimate& a, const WeightEstimate& b) {
  WeightEstimate out = a;
  out.snapped.reset();
  out.snap_candidates = -1;
  out.samples = a.samples + b.samples;
  out.rejected = a.rejected + b.rejected;
  out.seed = b.seed;
  out.converged = a.converged && b.converged;
  if (a.std_error == 0) {
    out.value = a.value;
    out.std_error = 0;
  } else if (b.std_error == 0) {
    out.value = b.value;
    out.std_error = 0;
  } else {
    double wa = 1 / (a.std_error * a.std_error);
    double wb = 1 / (b.std_error * b.std_error);
    out.value = (a.value * wa + b.value * wb) / (wa + wb);
    out.std_error = std::sqrt(1 / (wa + wb));
  }
  return out;
}

WeightSource::WeightSource(ColorMode mode, WeightSourceOptions opt, WeightCache* cache)
    : mode_(mode), opt_(std::move(opt)), cache_(cache) {}

namespace {

KGraph flip_pairs(const KGraph& g, unsigned mask) {
  KGraph out = g;
  for (int v = 0; v < g.n; ++v)
    if (mask >> v & 1) {
      std::swap(out.out[v][0], out.out[v][1]);
      if (out.colored()) std::swap(out.colors[v][0], out.colors[v][1]);
    }
  return out;
}

// The wedge of the edge forms changes sign under swapping a vertex's edge
// pair, and picks up (-1)^(E+n) under the half-plane reflection (every arg
// flips plus one orientation flip per aerial point). Sending each graph to
// the least id in that orbit lets a whole orbit share one integration.
struct OrbitRep {
  KGraph graph;
  std::string id;
  int sign = 1;
};

OrbitRep orbit_representative(const KGraph& g, bool use_mirror) {
  OrbitRep best{g, canonical_id(g), 1};
  int mirror_sign = (g.edge_count() % 2 == 0 ? 1 : -1) * (g.n % 2 == 0 ? 1 : -1);
  for (unsigned mask = 0; mask < (1u << g.n); ++mask) {
    int s = std::popcount(mask) % 2 == 0 ? 1 : -1;
    KGraph f = flip_pairs(g, mask);
    std::string id = canonical_id(f);
    if (id < best.id) best = {f, id, s};
    if (use_mirror) {
      KGraph m = mirror_graph(f);
      std::string mid = canonical_id(m);
      if (mid < best.id) best = {m, mid, s * mirror_sign};
    }
  }
  return best;
}

}  // namespace

std::optional<WeightEstimate> WeightSource::estimate(const KGraph& g) {
  std::string id = canonical_id(g);
  if (auto it = memo_.find(id); it != memo_.end()) return it->second;

  // half-plane reflection: with one ground point the mirror is the graph
  // itself, so an odd row-plus-orientation count forces the weight to zero
  if (g.m == 1) {
    int eform = 0;
    for (int e = 0; e < g.edge_count(); ++e)
      if (g.target(e).kind != TargetKind::Infinity) ++eform;
    if ((eform + g.n) % 2 == 1) {
      WeightEstimate zero;
      zero.graph_id = id;
      zero.seed = opt_.integrate.seed;
      zero.snapped = Rat(0);
      zero.snap_candidates = 1;
      memo_.emplace(id, zero);
      return zero;
    }
  }

  // reduce to the orbit representative so symmetric variants share the
  // integration and the cache entry
  if (g.n >= 1) {
    OrbitRep rep = orbit_representative(g, g.m == 2 && mode_ == ColorMode::Plain);
    if (rep.id != id) {
      auto base = estimate(rep.graph);
      if (!base) return std::nullopt;
      WeightEstimate w = *base;
      w.graph_id = id;
      if (rep.sign < 0) {
        w.value = -w.value;
        if (w.snapped) w.snapped = -*w.snapped;
      }
      memo_.emplace(id, w);
      return w;
    }
  }

  // disconnected graphs factor over their aerial pieces, up to the sign of
  // interleaving the edge pairs
  if (opt_.factorize && g.m == 2 && mode_ == ColorMode::Plain) {
    auto comps = aerial_components(g);
    if (comps.size() > 1) {
      WeightEstimate out;
      out.graph_id = id;
      out.seed = opt_.integrate.seed;
      out.samples = 0;
      double value = 1, var = 0;
      Rat exact = 1;
      bool all_exact = true;
      int sign = 1;
      for (const auto& verts : comps) {
        auto [sub, s] = component_subgraph(g, verts);
        sign *= s;
        auto ce = estimate(sub);
        if (!ce) return std::nullopt;
        // first-order error propagation through the product
        var = var * ce->value * ce->value +
              ce->std_error * ce->std_error * value * value;
        value *= ce->value;
        if (ce->snapped)
          exact *= *ce->snapped;
        else
          all_exact = false;
        out.samples = out.samples == 0 ? ce->samples
                                       : std::min(out.samples, ce->samples);
        out.converged = out.converged && ce->converged;
      }
      out.value = sign * value;
      out.std_error = std::sqrt(var);
      if (all_exact) {
        out.snapped = sign * exact;
        out.snap_candidates = 1;
      } else if (opt_.den_bound > 0) {
        out = snap_rational(std::move(out), opt_.den_bound);
      }
      memo_.emplace(id, out);
      return out;
    }
  }

  std::string mode_key = color_mode_name(mode_);
  if (mode_ == ColorMode::FourColor && opt_.integrate.quadrant_vertical > 0)
    mode_key += ":v" + std::to_string(opt_.integrate.quadrant_vertical);

  std::optional<WeightEstimate> have;
  if (cache_ && cache_->enabled())
    if (auto hit = cache_->get(id, mode_key)) have = *hit;

  auto snapped_enough = [&](const WeightEstimate& w) {
    return opt_.den_bound > 0 &&
           snap_rational(w, opt_.den_bound).snapped.has_value();
  };

  if (!have || (!opt_.cache_only && opt_.max_samples > opt_.integrate.samples &&
                !snapped_enough(*have))) {
    if (opt_.cache_only) {
      misses_.push_back(id);
      return std::nullopt;
    }
    IntegrateOptions io = opt_.integrate;
    std::int64_t budget = std::max(opt_.max_samples, io.samples);
    while (true) {
      // derive a fresh scrambling per round so merged runs are independent
      std::uint64_t mix = io.seed;
      if (have) mix ^= splitmix64(mix += static_cast<std::uint64_t>(have->samples));
      io.seed = mix;
      WeightEstimate w = integrate_weight(g, mode_, io);
      w.graph_id = id;
      if (cache_ && cache_->enabled() && w.samples > 0) cache_->put(w, mode_key);
      have = have ? merge_estimates(*have, w) : w;
      have->graph_id = id;
      if (have->std_error == 0 || snapped_enough(*have)) break;
      io.samples *= 2;
      if (io.samples > budget) break;
    }
  }

  WeightEstimate w = *have;
  if (opt_.den_bound > 0) w = snap_rational(std::move(w), opt_.den_bound);
  memo_.emplace(id, w);
  return w;
}

std::optional<GraphWeight> WeightSource::weight(const KGraph& g) {
  auto e = estimate(g);
  if (!e) return std::nullopt;
  GraphWeight out;
  out.value = e->value;
  out.std_error = e->std_error;
  if (e->snapped) {
    out.exact = true;
    out.snapped = *e->snapped;
  }
  return out;
}

GraphWeightFn WeightSource::fn() {
  return [this](const KGraph& g) { return weight(g); };
}

}  // namespace kgc
