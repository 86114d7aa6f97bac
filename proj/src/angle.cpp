#include "kgc/angle.hpp"

#include <cmath>

namespace kgc {

namespace {

// Adds coef * d arg(w) for w = (px + sx*qx) + i*(py + sy*qy).
// d arg(w) = (-Im w dRe w + Re w dIm w) / |w|^2, and dRe w = dpx + sx dqx,
// dIm w = dpy + sy dqy.
void accumulate(AngleGrad& g, std::complex<double> p, std::complex<double> q,
                int sx, int sy, double coef) {
  double re = p.real() + sx * q.real();
  double im = p.imag() + sy * q.imag();
  double n2 = re * re + im * im;
  g.value += coef * std::atan2(im, re);
  double a = coef * -im / n2;
  double b = coef * re / n2;
  g.dpx += a;
  g.dpy += b;
  g.dqx += sx * a;
  g.dqy += sy * b;
}

}  // namespace

AngleGrad angle_half(std::complex<double> p, std::complex<double> q) {
  return angle_two(p, q, +1);
}

AngleGrad angle_two(std::complex<double> p, std::complex<double> q, int s) {
  AngleGrad g;
  accumulate(g, p, q, -1, -1, 1);
  accumulate(g, p, q, -1, +1, s);
  return g;
}

AngleGrad angle_four(std::complex<double> p, std::complex<double> q, int e1, int e2) {
  AngleGrad g;
  accumulate(g, p, q, -1, -1, 1);
  accumulate(g, p, q, -1, +1, e1);
  accumulate(g, p, q, +1, -1, e2);
  accumulate(g, p, q, +1, +1, e1 * e2);
  return g;
}

}  // namespace kgc
