#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oscml/interval.hpp"
#include "oscml/sublevel.hpp"

using namespace oscml;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense-sampling oracle: counts grid midpoints with |f| <= eps.  Not
// certified, but with a fine mesh it pins the measure to O(h) accuracy.
double sample_measure(const PolynomialPhase& f, double rho, double eps, int n) {
  long in = 0;
  double h = 2.0 * rho / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = -rho + (i + 0.5) * h, y = -rho + (j + 0.5) * h;
      if (std::abs(eval_phase(f, x, y)) <= eps) ++in;
    }
  return static_cast<double>(in) * h * h;
}

}  // namespace

TEST_CASE("interval arithmetic basics") {
  Interval a{1.0, 2.0}, b{-3.0, 0.5};
  Interval s = a + b;
  CHECK(s.lo <= -2.0);
  CHECK(s.hi >= 2.5);
  Interval p = a * b;
  CHECK(p.lo <= -6.0);
  CHECK(p.hi >= 1.0);
  // even power of a straddling interval starts at zero
  Interval q = Interval{-2.0, 1.0}.pow(2);
  CHECK(q.lo <= 0.0);
  CHECK(q.lo >= -1e-10);
  CHECK(q.hi >= 4.0);
  Interval c = Interval{-2.0, 1.0}.pow(3);
  CHECK(c.lo <= -8.0);
  CHECK(c.hi >= 1.0);
}

TEST_CASE("interval evaluation encloses point evaluation") {
  auto f = parse_phase("x^3 - 2*x*y^2 + 3/7*y^4");
  CompiledPhase cf(f);
  for (double x0 : {-0.9, -0.2, 0.4})
    for (double y0 : {-0.7, 0.1, 0.8}) {
      Interval F = eval_interval(cf, {x0, x0 + 0.25}, {y0, y0 + 0.25});
      for (double dx : {0.0, 0.1, 0.25})
        for (double dy : {0.0, 0.13, 0.25}) {
          double v = eval_phase(f, x0 + dx, y0 + dy);
          CHECK(v >= F.lo);
          CHECK(v <= F.hi);
        }
    }
}

TEST_CASE("disk sublevel measure") {
  // {x^2 + y^2 <= eps} has measure pi*eps for eps <= rho^2
  auto f = parse_phase("x^2 + y^2");
  for (double eps : {0.25, 0.04}) {
    auto r = sublevel_measure(f, 1.0, eps, 12);
    CAPTURE(eps);
    CHECK(std::abs(r.measure - kPi * eps) <= r.error + 1e-12);
    CHECK(r.error < 0.01 * kPi * eps + 1e-4);
  }
}

TEST_CASE("full-domain case") {
  auto f = parse_phase("x^2 + y^2");
  auto r = sublevel_measure(f, 0.5, 10.0, 8);
  CHECK(r.measure == 1.0);
  CHECK(r.error == 0.0);
}

TEST_CASE("empty case") {
  auto f = parse_phase("x^2 + y^2 + x^2*y^2");
  // |f| >= ... has no points with |f| <= eps except near origin; with eps
  // tiny the measure collapses
  auto r = sublevel_measure(f, 1.0, 1e-8, 12);
  CHECK(r.measure < 1e-3);
}

TEST_CASE("monotonicity in epsilon") {
  auto f = parse_phase("x^3 + y^3");
  double prev = -1.0;
  for (double eps : {0.01, 0.05, 0.2, 1.0}) {
    auto r = sublevel_measure(f, 1.0, eps, 11);
    CHECK(r.measure + r.error >= prev - 1e-12);
    prev = r.measure - r.error;
  }
}

TEST_CASE("matches dense sampling oracle") {
  for (const char* s : {"x^2 - y^2", "x^2*y^2", "x^3 + y^3", "x^2 + 3*x*y^3"}) {
    auto f = parse_phase(s);
    for (double eps : {0.3, 0.05}) {
      auto r = sublevel_measure(f, 1.0, eps, 12);
      double approx = sample_measure(f, 1.0, eps, 1500);
      CAPTURE(s);
      CAPTURE(eps);
      // the sampling oracle itself is good to about perimeter * h
      CHECK(std::abs(r.measure - approx) <= r.error + 0.02);
    }
  }
}

TEST_CASE("certification soundness: measure brackets the truth") {
  // saddle: exact measure of {|x^2 - y^2| <= eps} on [-1,1]^2 is
  // 4*(eps + integral_{sqrt(eps)}^{1} ... ) -- compare against the sampling
  // oracle at high resolution and require the certified bars to cover it.
  auto f = parse_phase("x^2 - y^2");
  double eps = 0.1;
  auto r = sublevel_measure(f, 1.0, eps, 13);
  double truth = sample_measure(f, 1.0, eps, 4000);
  CHECK(r.measure - r.error <= truth + 0.005);
  CHECK(r.measure + r.error >= truth - 0.005);
}

TEST_CASE("deeper bisection tightens the error") {
  auto f = parse_phase("x^2 - y^2");
  auto shallow = sublevel_measure(f, 1.0, 0.1, 8);
  auto deep = sublevel_measure(f, 1.0, 0.1, 13);
  CHECK(deep.error < shallow.error);
  // undecided band ~ boundary length * cell size = 8 * 2^-12
  CHECK(deep.error < 5e-3);
}

TEST_CASE("serial and OpenMP agree bit for bit") {
  auto f = parse_phase("x^3 + y^3 + x^2*y^2");
  for (double eps : {0.2, 0.01}) {
    auto a = sublevel_measure(f, 1.0, eps, 12, ExecMode::serial);
    auto b = sublevel_measure(f, 1.0, eps, 12, ExecMode::openmp);
    CAPTURE(eps);
    CHECK(a.measure == b.measure);
    CHECK(a.error == b.error);
  }
}

TEST_CASE("sup_abs_bound dominates sampled maxima") {
  auto f = parse_phase("x^3 - 5*x*y^2 + y^4");
  double bound = sup_abs_bound(f, 1.0);
  double seen = 0.0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) {
      double x = -1.0 + 0.02 * i, y = -1.0 + 0.02 * j;
      seen = std::max(seen, std::abs(eval_phase(f, x, y)));
    }
  CHECK(bound >= seen);
  CHECK(bound <= 20.0);  // coefficient-sum bound is 1+5+4 = 10 at rho = 1
}

TEST_CASE("bad arguments") {
  auto f = parse_phase("x^2 + y^2");
  CHECK_THROWS_AS(sublevel_measure(f, -1.0, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(sublevel_measure(f, 1.0, -0.1, 10), std::invalid_argument);
}
