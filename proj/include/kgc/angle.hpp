#pragma once

#include <complex>

namespace kgc {

// An angle sum evaluated at a pair of points, together with its gradient in
// the four real coordinates. Gradients are what the weight integrands consume;
// values are only exposed for diagnostics, so no branch-cut smoothing is done.
struct AngleGrad {
  double value = 0;
  double dpx = 0, dpy = 0;
  double dqx = 0, dqy = 0;
};

// phi(p,q) = arg(p-q) + arg(p-conj(q)), the upper half-plane propagator angle.
AngleGrad angle_half(std::complex<double> p, std::complex<double> q);

// Two-color variant: arg(p-q) + s*arg(p-conj(q)) with s = +1 or -1.
// For real q the s = -1 form vanishes identically, gradient included.
AngleGrad angle_two(std::complex<double> p, std::complex<double> q, int s);

// Four-color quadrant variant:
//   arg(p-q) + e1*arg(p-conj(q)) + e2*arg(p+conj(q)) + e1*e2*arg(p+q)
// with e1, e2 = +1 or -1. Reflecting q into the other three quadrants makes
// the form closed on the open first quadrant and fixes its boundary behavior:
// e1 = -1 kills it on the real axis, e2 = -1 on the imaginary axis.
AngleGrad angle_four(std::complex<double> p, std::complex<double> q, int e1, int e2);

}  // namespace kgc
