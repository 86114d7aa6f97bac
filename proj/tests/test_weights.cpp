#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "kgc/weights.hpp"

using namespace kgc;

namespace {

// finite-difference check of every jet entry a chart reports
void check_chart_jets(const Chart& chart, const std::vector<double>& cube) {
  std::vector<VertexJet> air, gnd;
  std::vector<double> u = cube;
  chart.eval(u.data(), air, gnd);
  auto all = air;
  all.insert(all.end(), gnd.begin(), gnd.end());

  const double h = 1e-6;
  for (int k = 0; k < chart.dimension(); ++k) {
    std::vector<VertexJet> ap, gp, am, gm;
    u[k] = cube[k] + h;
    chart.eval(u.data(), ap, gp);
    u[k] = cube[k] - h;
    chart.eval(u.data(), am, gm);
    u[k] = cube[k];
    auto allp = ap;
    allp.insert(allp.end(), gp.begin(), gp.end());
    auto allm = am;
    allm.insert(allm.end(), gm.begin(), gm.end());

    for (size_t v = 0; v < all.size(); ++v) {
      double dx = 0, dy = 0;
      for (const auto& row : all[v].d)
        if (static_cast<int>(row[0]) == k) {
          dx += row[1];
          dy += row[2];
        }
      double fx = (allp[v].x - allm[v].x) / (2 * h);
      double fy = (allp[v].y - allm[v].y) / (2 * h);
      CAPTURE(k);
      CAPTURE(v);
      CHECK(dx == doctest::Approx(fx).epsilon(1e-5));
      CHECK(dy == doctest::Approx(fy).epsilon(1e-5));
    }
  }
}

WeightEstimate est(double value, double std_error) {
  WeightEstimate w;
  w.value = value;
  w.std_error = std_error;
  return w;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kgc-wtest-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int counter;
};
int TempDir::counter = 0;

}  // namespace

TEST_CASE("chart jets match finite differences") {
  check_chart_jets(Chart(ChartKind::HalfPlaneAngles, 2, 2),
                   {0.31, 0.62, 0.47, 0.58});
  check_chart_jets(Chart(ChartKind::HalfPlaneTan, 2, 2),
                   {0.41, 0.23, 0.68, 0.37});
  check_chart_jets(Chart(ChartKind::HalfPlaneOne, 2, 1), {0.55, 0.33, 0.71});
  check_chart_jets(Chart(ChartKind::Quadrant, 2, 2, 1),
                   {0.27, 0.52, 0.64, 0.39, 0.46});
  check_chart_jets(Chart(ChartKind::Quadrant, 1, 3, 1),
                   {0.35, 0.61, 0.48, 0.57});
}

TEST_CASE("chart validation") {
  CHECK(Chart(ChartKind::HalfPlaneAngles, 3, 2).dimension() == 6);
  CHECK(Chart(ChartKind::HalfPlaneOne, 2, 1).dimension() == 3);
  CHECK(Chart(ChartKind::Quadrant, 2, 3, 2).dimension() == 6);
  CHECK(Chart(ChartKind::Quadrant, 2, 3, 2).vertical_count() == 2);
  CHECK_THROWS_AS(Chart(ChartKind::HalfPlaneAngles, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Chart(ChartKind::HalfPlaneOne, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Chart(ChartKind::HalfPlaneTan, 1, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Chart(ChartKind::Quadrant, 1, 0), std::invalid_argument);
}

TEST_CASE("one-vertex wedge weighs one half") {
  auto g = parse_graph("n=1;m=2;e=1>G1,1>G2");
  IntegrateOptions io;
  io.samples = 1 << 12;
  auto w = integrate_weight(g, ColorMode::Plain, io);
  CHECK(std::abs(w.value - 0.5) < 1e-4);
  CHECK(w.std_error < 1e-4);
  CHECK(w.converged);
  CHECK(w.samples == (1 << 12) * 16);

  auto s = snap_rational(w, 48);
  REQUIRE(s.snapped.has_value());
  CHECK(*s.snapped == rat(1, 2));

  // swapping the two outgoing edges flips the orientation of the wedge
  auto flipped = parse_graph("n=1;m=2;e=1>G2,1>G1");
  auto wf = integrate_weight(flipped, ColorMode::Plain, io);
  CHECK(wf.value == doctest::Approx(-w.value).epsilon(1e-12));
}

TEST_CASE("integration is deterministic") {
  auto g = parse_graph("n=2;m=2;e=1>2,1>G1,2>G1,2>G2");
  IntegrateOptions io;
  io.samples = 1 << 12;
  io.seed = 42;
  auto a = integrate_weight(g, ColorMode::Plain, io);
  auto b = integrate_weight(g, ColorMode::Plain, io);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  io.seed = 43;
  auto c = integrate_weight(g, ColorMode::Plain, io);
  CHECK(a.value != c.value);
}

TEST_CASE("gauge choices agree on the two-vertex chain") {
  auto g = parse_graph("n=2;m=2;e=1>2,1>G1,2>G1,2>G2");
  IntegrateOptions io;
  io.samples = 1 << 14;

  auto a = integrate_weight(g, ColorMode::Plain, io);

  io.ground = {-2.0, 5.0};
  auto b = integrate_weight(g, ColorMode::Plain, io);
  io.ground.clear();

  io.chart = ChartKind::HalfPlaneTan;
  io.samples = 1 << 16;  // the tan chart spends samples far from the mass
  auto c = integrate_weight(g, ColorMode::Plain, io);

  CHECK(std::abs(a.value - b.value) <
        3 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error));
  CHECK(std::abs(a.value - c.value) <
        3 * std::sqrt(a.std_error * a.std_error + c.std_error * c.std_error));
  // and all of them sit on the known value
  CHECK(std::abs(a.value + 1.0 / 12) < 3 * a.std_error);
}

TEST_CASE("chain weight snaps to -1/12 under escalation") {
  WeightSourceOptions wo;
  wo.integrate.samples = 1 << 15;
  wo.max_samples = 1 << 19;
  WeightSource src(ColorMode::Plain, wo);

  auto g = parse_graph("n=2;m=2;e=1>2,1>G1,2>G1,2>G2");
  auto e = src.estimate(g);
  REQUIRE(e.has_value());
  REQUIRE(e->snapped.has_value());
  CHECK(*e->snapped == rat(-1, 12));

  auto w = src.weight(g);
  REQUIRE(w.has_value());
  REQUIRE(w->exact);
  CHECK(w->snapped == rat(-1, 12));

  // orbit reduction: an edge-order flip is evaluated from the same
  // representative, so the negation is exact
  auto flipped = parse_graph("n=2;m=2;e=1>G1,1>2,2>G1,2>G2");
  auto ef = src.estimate(flipped);
  REQUIRE(ef.has_value());
  CHECK(ef->value == -e->value);
  REQUIRE(ef->snapped.has_value());
  CHECK(*ef->snapped == rat(1, 12));

  // the mirror of the chain has (-1)^(E+n) = +1, also exact
  auto m = src.estimate(mirror_graph(g));
  REQUIRE(m.has_value());
  CHECK(m->value == e->value);
}

TEST_CASE("two-wheel weight snaps to -1/24") {
  WeightSourceOptions wo;
  wo.integrate.samples = 1 << 15;
  wo.max_samples = 1 << 21;
  WeightSource src(ColorMode::Plain, wo);
  auto e = src.estimate(parse_graph("n=2;m=2;e=1>2,1>G1,2>1,2>G2"));
  REQUIRE(e.has_value());
  REQUIRE(e->snapped.has_value());
  CHECK(*e->snapped == rat(-1, 24));
}

TEST_CASE("disconnected superposition factorizes exactly") {
  WeightSourceOptions wo;
  wo.integrate.samples = 1 << 12;
  WeightSource src(ColorMode::Plain, wo);
  auto g = parse_graph("n=2;m=2;e=1>G1,1>G2,2>G1,2>G2");
  auto e = src.estimate(g);
  REQUIRE(e.has_value());
  REQUIRE(e->snapped.has_value());
  CHECK(*e->snapped == rat(1, 4));

  // cross-check against direct integration of the 4-form
  WeightSourceOptions direct = wo;
  direct.factorize = false;
  direct.integrate.samples = 1 << 14;
  WeightSource dsrc(ColorMode::Plain, direct);
  auto d = dsrc.estimate(g);
  REQUIRE(d.has_value());
  CHECK(std::abs(d->value - 0.25) < 3 * d->std_error);

  // one flipped factor negates the product
  auto h = parse_graph("n=2;m=2;e=1>G2,1>G1,2>G1,2>G2");
  auto eh = src.estimate(h);
  REQUIRE(eh.has_value());
  CHECK(*eh->snapped == rat(-1, 4));
}

TEST_CASE("odd wheel weight vanishes") {
  IntegrateOptions io;
  io.samples = 1 << 14;
  auto w = integrate_weight(
      parse_graph("n=3;m=2;e=1>2,1>G1,2>3,2>G2,3>1,3>G1"), ColorMode::Plain,
      io);
  CHECK(std::abs(w.value) < 3 * w.std_error);
}

TEST_CASE("one-ground charts") {
  IntegrateOptions io;
  io.samples = 1 << 12;

  SUBCASE("single vertex against one marked point is exactly one") {
    for (const char* s : {"n=1;m=1;e=1>G1,1>I", "n=1;m=1;e=1>I,1>G1"}) {
      auto w = integrate_weight(parse_graph(s), ColorMode::Plain, io);
      CHECK(w.value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(w.std_error == 0);
    }
  }

  SUBCASE("odd edge-plus-vertex parity forces zero") {
    // the mirror reflection maps the gauge-fixed space to itself and sends
    // the integrand to (-1)^(E+n) times itself
    auto g = parse_graph("n=2;m=1;e=1>2,1>G1,2>G1,2>I");
    auto w = integrate_weight(g, ColorMode::Plain, io);
    CHECK(std::abs(w.value) < 3 * w.std_error);

    WeightSourceOptions wo;
    wo.integrate = io;
    WeightSource src(ColorMode::Plain, wo);
    auto e = src.estimate(g);
    REQUIRE(e.has_value());
    CHECK(e->value == 0);
    CHECK(e->samples == 0);
    REQUIRE(e->snapped.has_value());
    CHECK(*e->snapped == rat(0, 1));
  }
}

TEST_CASE("empty graph integrates to one") {
  auto w = integrate_weight(parse_graph("n=0;m=2;e="), ColorMode::Plain);
  CHECK(w.value == 1.0);
  CHECK(w.std_error == 0);
  CHECK(w.samples == 0);
}

TEST_CASE("two-color forms") {
  IntegrateOptions io;
  io.samples = 1 << 12;

  SUBCASE("plus-plus wedge keeps the half-plane value") {
    auto w = integrate_weight(parse_graph("n=1;m=2;e=1>G1:+,1>G2:+"),
                              ColorMode::TwoColor, io);
    CHECK(std::abs(w.value - 0.5) < 1e-4);
  }

  SUBCASE("minus edge into the real axis is structurally zero") {
    auto w = integrate_weight(parse_graph("n=1;m=2;e=1>G1:-,1>G2:+"),
                              ColorMode::TwoColor, io);
    CHECK(w.value == 0);
    CHECK(w.std_error == 0);
    CHECK(w.samples == 0);
  }

  SUBCASE("mode and coloring must agree") {
    CHECK_THROWS_AS(integrate_weight(parse_graph("n=1;m=2;e=1>G1:+,1>G2:+"),
                                     ColorMode::Plain, io),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_weight(parse_graph("n=1;m=2;e=1>G1,1>G2"),
                                     ColorMode::TwoColor, io),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_weight(parse_graph("n=1;m=2;e=1>G1:+,1>G2:+"),
                                     ColorMode::FourColor, io),
                    std::invalid_argument);
  }
}

TEST_CASE("form degree must fill the chart dimension") {
  CHECK_THROWS_WITH_AS(
      integrate_weight(parse_graph("n=1;m=2;e=1>G1,1>I"), ColorMode::Plain),
      "dimension mismatch: 1 form edges vs 2 chart parameters",
      std::invalid_argument);
}

TEST_CASE("snapping rules") {
  SUBCASE("lone candidate in the wide window") {
    auto s = snap_rational(est(0.4999, 0.0008), 48);
    REQUIRE(s.snapped.has_value());
    CHECK(*s.snapped == rat(1, 2));
    CHECK(s.snap_candidates == 1);
  }

  SUBCASE("crowded window resolved by the inner window") {
    auto s = snap_rational(est(0.0832, 0.0011), 48);
    REQUIRE(s.snapped.has_value());
    CHECK(*s.snapped == rat(1, 12));
    CHECK(s.snap_candidates >= 2);
  }

  SUBCASE("inner window survivor must be the simplest candidate") {
    // 4/47 sits alone within one sigma here, but 1/12 is in sight
    auto s = snap_rational(est(0.0849, 0.0006), 48);
    CHECK_FALSE(s.snapped.has_value());
    CHECK(s.snap_candidates >= 2);
  }

  SUBCASE("interval too wide") {
    auto s = snap_rational(est(0.2501, 0.2), 48);
    CHECK_FALSE(s.snapped.has_value());
    CHECK(s.snap_candidates >= 2);
  }

  SUBCASE("empty interval") {
    auto s = snap_rational(est(0.6, 1e-6), 3);
    CHECK_FALSE(s.snapped.has_value());
    CHECK(s.snap_candidates == 0);
  }

  SUBCASE("exact estimates snap to their dyadic value") {
    auto s = snap_rational(est(0.375, 0.0), 48);
    REQUIRE(s.snapped.has_value());
    CHECK(*s.snapped == rat(3, 8));
    auto t = snap_rational(est(0.3762919, 0.0), 48);
    CHECK_FALSE(t.snapped.has_value());
  }

  SUBCASE("bound zero disables snapping") {
    auto s = snap_rational(est(0.5, 0.0001), 0);
    CHECK_FALSE(s.snapped.has_value());
  }
}

TEST_CASE("estimate merging") {
  auto a = est(0.50, 0.002);
  a.samples = 1024;
  a.rejected = 3;
  auto b = est(0.51, 0.002);
  b.samples = 2048;
  b.rejected = 1;
  auto m = merge_estimates(a, b);
  CHECK(m.value == doctest::Approx(0.505));
  CHECK(m.std_error == doctest::Approx(0.002 / std::sqrt(2.0)));
  CHECK(m.samples == 3072);
  CHECK(m.rejected == 4);

  // an exact record wins outright
  auto c = est(0.5, 0.0);
  auto mc = merge_estimates(a, c);
  CHECK(mc.value == 0.5);
  CHECK(mc.std_error == 0);
}

TEST_CASE("weight cache") {
  TempDir tmp;

  SUBCASE("round trip and merge on reload") {
    {
      WeightCache cache(tmp.path.string());
      auto w = est(0.083, 0.001);
      w.graph_id = "n=2;m=2;e=1>2,1>G1,2>G1,2>G2";
      w.samples = 4096;
      w.seed = 7;
      cache.put(w, "plain");
      auto got = cache.get(w.graph_id, "plain");
      REQUIRE(got.has_value());
      CHECK(got->value == 0.083);
      CHECK_FALSE(cache.get(w.graph_id, "two-color").has_value());

      // an independent run merges by inverse variance
      auto w2 = w;
      w2.seed = 8;
      w2.value = 0.084;
      cache.put(w2, "plain");
    }
    WeightCache reload(tmp.path.string());
    auto got = reload.get("n=2;m=2;e=1>2,1>G1,2>G1,2>G2", "plain");
    REQUIRE(got.has_value());
    CHECK(got->value == doctest::Approx(0.0835));
    CHECK(got->std_error == doctest::Approx(0.001 / std::sqrt(2.0)));
    CHECK(got->samples == 8192);
  }

  SUBCASE("re-putting the same record does not sharpen the error") {
    {
      WeightCache cache(tmp.path.string());
      auto w = est(0.5, 0.002);
      w.graph_id = "n=1;m=2;e=1>G1,1>G2";
      w.samples = 1024;
      w.seed = 1;
      cache.put(w, "plain");
      cache.put(w, "plain");
    }
    WeightCache reload(tmp.path.string());
    auto got = reload.get("n=1;m=2;e=1>G1,1>G2", "plain");
    REQUIRE(got.has_value());
    CHECK(got->std_error == doctest::Approx(0.002));
    CHECK(got->samples == 1024);
  }

  SUBCASE("records from other convention versions are quarantined") {
    std::filesystem::create_directories(tmp.path);
    {
      std::ofstream out(tmp.path / "weights.cache");
      out << "n=1;m=2;e=1>G1,1>G2 plain 99 0.5 0.001 1024 7\n";
      out << "n=1;m=2;e=1>G2,1>G1 plain 1 -0.5 0.001 1024 7\n";
    }
    WeightCache cache(tmp.path.string());
    CHECK(cache.stale_entries() == 1);
    CHECK_FALSE(cache.get("n=1;m=2;e=1>G1,1>G2", "plain").has_value());
    CHECK(cache.get("n=1;m=2;e=1>G2,1>G1", "plain").has_value());
  }

  SUBCASE("disabled cache") {
    WeightCache cache("");
    CHECK_FALSE(cache.enabled());
    CHECK_FALSE(cache.get("x", "plain").has_value());
  }

  SUBCASE("env_dir reads the environment") {
    const char* prev = std::getenv("KGC_CACHE_DIR");
    std::string saved = prev ? prev : "";
    ::setenv("KGC_CACHE_DIR", "/tmp/kgc-env-probe", 1);
    CHECK(WeightCache::env_dir() == "/tmp/kgc-env-probe");
    if (prev)
      ::setenv("KGC_CACHE_DIR", saved.c_str(), 1);
    else
      ::unsetenv("KGC_CACHE_DIR");
  }
}

TEST_CASE("weight source consults the cache before integrating") {
  TempDir tmp;
  WeightCache cache(tmp.path.string());

  WeightSourceOptions wo;
  wo.integrate.samples = 1 << 12;

  const std::string id = "n=1;m=2;e=1>G1,1>G2";
  {
    WeightSource src(ColorMode::Plain, wo, &cache);
    auto e = src.estimate(parse_graph(id));
    REQUIRE(e.has_value());
    CHECK(*e->snapped == rat(1, 2));
  }
  // a fresh source over the same directory must not integrate again
  WeightCache cache2(tmp.path.string());
  WeightSourceOptions frozen = wo;
  frozen.cache_only = true;
  WeightSource src2(ColorMode::Plain, frozen, &cache2);
  auto e2 = src2.estimate(parse_graph(id));
  REQUIRE(e2.has_value());
  CHECK(*e2->snapped == rat(1, 2));
  CHECK(src2.misses().empty());

  auto miss = src2.estimate(parse_graph("n=2;m=2;e=1>2,1>G1,2>G1,2>G2"));
  CHECK_FALSE(miss.has_value());
  REQUIRE(src2.misses().size() == 1);
}
