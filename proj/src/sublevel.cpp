#include "oscml/sublevel.hpp"

#include <vector>

#include "oscml/interval.hpp"

namespace oscml {

namespace {

struct Box {
  double x0, y0, size;
};

enum class Cls { inside, outside, undecided };

}  // namespace

SublevelResult sublevel_measure(const PolynomialPhase& f, double rho, double epsilon,
                                int max_depth, ExecMode exec) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  CompiledPhase cf(f);
  std::vector<Box> level{{-rho, -rho, 2.0 * rho}};
  SublevelResult res;
  for (int depth = 0; depth <= max_depth; ++depth) {
    const std::size_t n = level.size();
    if (n == 0) break;
    std::vector<Cls> cls(n);
    const bool par = exec == ExecMode::openmp;
#pragma omp parallel for schedule(static) if (par)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const Box& b = level[i];
      Interval fx = eval_interval(cf, {b.x0, b.x0 + b.size}, {b.y0, b.y0 + b.size});
      if (fx.lo >= -epsilon && fx.hi <= epsilon)
        cls[i] = Cls::inside;
      else if (fx.lo > epsilon || fx.hi < -epsilon)
        cls[i] = Cls::outside;
      else
        cls[i] = Cls::undecided;
    }
    std::vector<Box> next;
    for (std::size_t i = 0; i < n; ++i) {
      const Box& b = level[i];
      double area = b.size * b.size;
      switch (cls[i]) {
        case Cls::inside:
          res.measure += area;
          break;
        case Cls::outside:
          break;
        case Cls::undecided:
          if (depth == max_depth) {
            res.measure += 0.5 * area;
            res.error += 0.5 * area;
          } else {
            double h = 0.5 * b.size;
            next.push_back({b.x0, b.y0, h});
            next.push_back({b.x0 + h, b.y0, h});
            next.push_back({b.x0, b.y0 + h, h});
            next.push_back({b.x0 + h, b.y0 + h, h});
          }
          break;
      }
    }
    level = std::move(next);
  }
  return res;
}

double sup_abs_bound(const PolynomialPhase& f, double rho) {
  return CompiledPhase(f).abs_bound(rho, rho);
}

}  // namespace oscml
