// Minimal interval arithmetic used for cell certification.  Bounds are
// widened by a few ulps after each operation instead of using directed
// rounding.
#pragma once

#include <algorithm>
#include <cmath>

#include "oscml/phase.hpp"

namespace oscml {

struct Interval {
  double lo = 0.0, hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  Interval widened() const {
    double w = 4e-16 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
    return {lo - w, hi + w};
  }

  Interval operator+(const Interval& o) const { return Interval{lo + o.lo, hi + o.hi}.widened(); }
  Interval operator*(const Interval& o) const {
    double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return Interval{std::min({a, b, c, d}), std::max({a, b, c, d})}.widened();
  }
  Interval scaled(double s) const {
    return (s >= 0 ? Interval{lo * s, hi * s} : Interval{hi * s, lo * s}).widened();
  }
  Interval pow(int n) const {
    if (n == 0) return point(1.0);
    if (n % 2 == 1 || lo >= 0.0 || hi <= 0.0) {
      double a = std::pow(lo, n), b = std::pow(hi, n);
      return hull(a, b).widened();
    }
    // even power straddling zero
    return Interval{0.0, std::max(std::pow(lo, n), std::pow(hi, n))}.widened();
  }
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
};

// Range enclosure of f over the box [x.lo,x.hi] x [y.lo,y.hi].
inline Interval eval_interval(const CompiledPhase& f, Interval x, Interval y) {
  Interval px[65], py[65];
  px[0] = py[0] = Interval::point(1.0);
  for (int i = 1; i <= f.max_j; ++i) px[i] = px[i - 1] * x;
  for (int i = 1; i <= f.max_k; ++i) py[i] = py[i - 1] * y;
  Interval s = Interval::point(0.0);
  for (const auto& t : f.terms) s = s + (px[t.j] * py[t.k]).scaled(t.c);
  return s;
}

}  // namespace oscml
