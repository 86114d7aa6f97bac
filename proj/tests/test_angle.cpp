#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "kgc/angle.hpp"

using namespace kgc;
using C = std::complex<double>;

namespace {

// central finite differences on all four coordinates
void check_gradient(const char* label, AngleGrad (*f)(C, C, int, int), C p, C q,
                    int e1, int e2) {
  INFO(label, " p=", p.real(), "+", p.imag(), "i q=", q.real(), "+", q.imag(), "i");
  const double h = 1e-6;
  AngleGrad g = f(p, q, e1, e2);
  auto d = [&](C dp, C dq) {
    return (f(p + h * dp, q + h * dq, e1, e2).value -
            f(p - h * dp, q - h * dq, e1, e2).value) /
           (2 * h);
  };
  CHECK(g.dpx == doctest::Approx(d(C(1, 0), C(0, 0))).epsilon(1e-6));
  CHECK(g.dpy == doctest::Approx(d(C(0, 1), C(0, 0))).epsilon(1e-6));
  CHECK(g.dqx == doctest::Approx(d(C(0, 0), C(1, 0))).epsilon(1e-6));
  CHECK(g.dqy == doctest::Approx(d(C(0, 0), C(0, 1))).epsilon(1e-6));
}

AngleGrad two_wrap(C p, C q, int s, int) { return angle_two(p, q, s); }

}  // namespace

TEST_CASE("half-plane angle values") {
  // aligned on the imaginary axis the two terms cancel
  CHECK(angle_half(C(0, 1), C(0, 2)).value == doctest::Approx(0.0));
  // real target: both terms coincide
  C p(0.3, 0.8), q(1.0, 0.0);
  CHECK(angle_half(p, q).value == doctest::Approx(2 * std::arg(p - q)));
  CHECK(angle_half(p, C(0, 0)).value == doctest::Approx(2 * std::arg(p)));
}

TEST_CASE("minus-color form vanishes identically on real targets") {
  for (C p : {C(0.3, 0.8), C(-1.2, 0.4), C(2.0, 2.5)})
    for (double qx : {-0.7, 0.0, 1.0, 3.14}) {
      AngleGrad g = angle_two(p, C(qx, 0), -1);
      CHECK(g.value == doctest::Approx(0.0));
      CHECK(g.dpx == doctest::Approx(0.0));
      CHECK(g.dpy == doctest::Approx(0.0));
      CHECK(g.dqx == doctest::Approx(0.0));
      // dqy need not vanish: the form dies only along the axis
    }
}

TEST_CASE("gradients agree with finite differences") {
  C pts[] = {C(0.3, 0.8), C(-1.1, 0.5), C(0.9, 2.2)};
  C tgt[] = {C(0.7, 1.4), C(2.0, 0.3), C(0.5, 0.0)};
  for (C p : pts)
    for (C q : tgt) {
      if (p == q) continue;
      check_gradient("two+", two_wrap, p, q, +1, 0);
      check_gradient("two-", two_wrap, p, q, -1, 0);
    }
  C qpts[] = {C(0.4, 0.9), C(1.7, 0.2), C(0.2, 1.8)};
  for (C p : qpts)
    for (C q : qpts) {
      if (p == q) continue;
      for (int e1 : {-1, 1})
        for (int e2 : {-1, 1}) check_gradient("four", angle_four, p, q, e1, e2);
    }
}

TEST_CASE("half equals two-color with plus sign") {
  C p(0.6, 1.1), q(1.4, 0.7);
  AngleGrad a = angle_half(p, q);
  AngleGrad b = angle_two(p, q, +1);
  CHECK(a.value == b.value);
  CHECK(a.dpx == b.dpx);
  CHECK(a.dqy == b.dqy);
}

TEST_CASE("four-color form dies on its color-selected boundary") {
  C p(0.8, 1.3);
  // q on the positive real axis: every e1 = -1 form vanishes with gradient
  for (int e2 : {-1, 1}) {
    AngleGrad g = angle_four(p, C(1.7, 0), -1, e2);
    CHECK(g.value == doctest::Approx(0.0));
    CHECK(g.dpx == doctest::Approx(0.0));
    CHECK(g.dpy == doctest::Approx(0.0));
    CHECK(g.dqx == doctest::Approx(0.0));
  }
  // q on the positive imaginary axis: every e2 = -1 form vanishes
  for (int e1 : {-1, 1}) {
    AngleGrad g = angle_four(p, C(0, 0.9), e1, -1);
    CHECK(g.value == doctest::Approx(0.0));
    CHECK(g.dpx == doctest::Approx(0.0));
    CHECK(g.dpy == doctest::Approx(0.0));
    CHECK(g.dqy == doctest::Approx(0.0));
  }
}

TEST_CASE("four-color reduces to doubled half-plane pieces on the axes") {
  // with q real and e1 = +1 the quadrant form is 2 arg(p-q) + 2 e2 arg(p+q)
  C p(0.5, 1.2);
  double qx = 0.8;
  for (int e2 : {-1, 1}) {
    AngleGrad g = angle_four(p, C(qx, 0), +1, e2);
    double expect = 2 * std::arg(p - qx) + 2 * e2 * std::arg(p + qx);
    CHECK(g.value == doctest::Approx(expect));
  }
}
