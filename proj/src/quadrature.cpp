#include "oscml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oscml/interval.hpp"

namespace oscml {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Gauss 7 / Kronrod 15 pair (QUADPACK abscissae/weights, positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  double x[15];
  double wk[15];
  double wg[15];  // zero at pure-Kronrod nodes
  Rule() {
    for (int i = 0; i < 7; ++i) {
      x[i] = -kXgk[i];
      x[14 - i] = kXgk[i];
      wk[i] = wk[14 - i] = kWgk[i];
      wg[i] = wg[14 - i] = (i % 2 == 1) ? kWg[i / 2] : 0.0;
    }
    x[7] = 0.0;
    wk[7] = kWgk[7];
    wg[7] = kWg[3];
  }
};
const Rule kRule;

struct Cell {
  double u0, v0, su, sv;
  int depth;
};

struct Inspect {
  bool skip = false;
  bool force_split = false;
  int axis = -1;  // 0: halve u only, 1: halve v only, -1: quadrisect
  double extra_err = 0.0;
  double osc = 0.0;  // per-direction phase variation, max over the two axes
};

struct Leaf {
  Cell c;
  Complex val{0.0, 0.0};
  Complex gu{0.0, 0.0};  // Gauss in u, Kronrod in v: degraded u-resolution
  Complex gv{0.0, 0.0};  // Kronrod in u, Gauss in v
  double err = 0.0;
  double extra = 0.0;
};

enum class KernelKind { ml, classical, envelope };

struct Integrand {
  const CompiledPhase* f = nullptr;
  const CompiledPhase* dfx = nullptr;  // df/dx1
  const CompiledPhase* dfy = nullptr;  // df/dx2
  const CompiledPhase* dft = nullptr;  // angular derivative x1 fy - x2 fx
  const Amplitude* psi = nullptr;
  double lambda = 0.0;
  KernelKind kind = KernelKind::classical;
  const MLEvaluator* ml = nullptr;
  double ml_tol = 1e-10;
  double thresh_M = 0.0;
  bool polar = false;  // (u,v) = (r,theta), jacobian r, amplitude == 1
  double support_r = 0.0;  // amplitude support radius (Cartesian only)
  double osc_limit = 1.0;
  int straddle_max_depth = 14;

  Complex eval(double u, double v) const {
    double x = u, y = v, jac = 1.0, amp = 1.0;
    if (polar) {
      x = u * std::cos(v);
      y = u * std::sin(v);
      jac = u;
    } else {
      amp = eval_amplitude(*psi, x, y);
      if (amp == 0.0) return {0.0, 0.0};
    }
    double fv = f->eval(x, y);
    switch (kind) {
      case KernelKind::classical:
        return std::polar(amp * jac, lambda * fv);
      case KernelKind::ml:
        return ml->eval(Complex(0.0, lambda * fv), ml_tol) * (amp * jac);
      case KernelKind::envelope: {
        double lf = lambda * std::abs(fv);
        if (thresh_M > 0.0 && lf < thresh_M) return {0.0, 0.0};
        return {std::abs(amp) * jac / (1.0 + lf), 0.0};
      }
    }
    return {0.0, 0.0};
  }

  Inspect inspect(const Cell& c) const {
    Inspect in;
    if (!polar) {
      // Cells entirely outside the amplitude support contribute nothing.
      double lx = c.u0 > 0.0 ? c.u0 : (c.u0 + c.su < 0.0 ? -(c.u0 + c.su) : 0.0);
      double ly = c.v0 > 0.0 ? c.v0 : (c.v0 + c.sv < 0.0 ? -(c.v0 + c.sv) : 0.0);
      if (lx * lx + ly * ly > support_r * support_r) {
        in.skip = true;
        return in;
      }
    }
    if (kind == KernelKind::envelope) {
      if (thresh_M > 0.0 && !polar) {
        Interval F = eval_interval(*f, {c.u0, c.u0 + c.su}, {c.v0, c.v0 + c.sv});
        double maxabs = F.mag();
        double minabs = F.lo > 0.0 ? F.lo : (F.hi < 0.0 ? -F.hi : 0.0);
        if (lambda * maxabs < thresh_M) {
          in.skip = true;
        } else if (lambda * minabs < thresh_M) {
          if (c.depth < straddle_max_depth)
            in.force_split = true;
          else
            in.extra_err = c.su * c.sv / (1.0 + thresh_M);
        }
      }
      return in;  // refinement otherwise driven by the rule difference only
    }
    if (polar) {
      // Bounding box of the annular cell; radial slope |df/dr| <= |grad f|
      // and angular slope from the exact angular derivative (zero for radial
      // phases, which keeps theta unsplit).
      double r1 = c.u0 + c.su;
      Interval bx{-r1, r1}, by{-r1, r1};
      double gx = eval_interval(*dfx, bx, by).mag();
      double gy = eval_interval(*dfy, bx, by).mag();
      double gr = std::hypot(gx, gy);
      double gt = eval_interval(*dft, bx, by).mag();
      double tu = lambda * gr * c.su, tv = lambda * gt * c.sv;
      // Per-direction budget: the tensor rule has rule_order points along each
      // axis, so each axis carries its own points-per-wavelength allowance.
      in.osc = std::max(tu, tv);
      in.axis = tu >= tv ? 0 : 1;  // halve only the oscillating direction
      if (in.osc > osc_limit) in.force_split = true;
      return in;
    }
    Interval bx{c.u0, c.u0 + c.su}, by{c.v0, c.v0 + c.sv};
    double g1 = eval_interval(*dfx, bx, by).mag();
    double g2 = eval_interval(*dfy, bx, by).mag();
    double tu = lambda * g1 * c.su, tv = lambda * g2 * c.sv;
    in.osc = std::max(tu, tv);
    in.axis = tu >= tv ? 0 : 1;
    if (in.osc > osc_limit) in.force_split = true;
    return in;
  }
};

Leaf eval_cell(const Integrand& g, const Cell& c, const Inspect& in) {
  Complex vals[225];
  double us[15], vs[15];
  for (int i = 0; i < 15; ++i) {
    us[i] = c.u0 + c.su * 0.5 * (kRule.x[i] + 1.0);
    vs[i] = c.v0 + c.sv * 0.5 * (kRule.x[i] + 1.0);
  }
  for (int i = 0; i < 15; ++i)
    for (int l = 0; l < 15; ++l) vals[i * 15 + l] = g.eval(us[i], vs[l]);
  Complex K{0.0, 0.0}, G{0.0, 0.0}, Gu{0.0, 0.0}, Gv{0.0, 0.0};
  double resabs = 0.0;
  for (int i = 0; i < 15; ++i)
    for (int l = 0; l < 15; ++l) {
      const Complex& y = vals[i * 15 + l];
      K += kRule.wk[i] * kRule.wk[l] * y;
      G += kRule.wg[i] * kRule.wg[l] * y;
      Gu += kRule.wg[i] * kRule.wk[l] * y;
      Gv += kRule.wk[i] * kRule.wg[l] * y;
      resabs += kRule.wk[i] * kRule.wk[l] * std::abs(y);
    }
  Complex mean = K * 0.25;  // K-average of the integrand over the cell
  double resasc = 0.0;
  for (int i = 0; i < 15; ++i)
    for (int l = 0; l < 15; ++l)
      resasc += kRule.wk[i] * kRule.wk[l] * std::abs(vals[i * 15 + l] - mean);
  double jac = 0.25 * c.su * c.sv;
  double d = std::abs(K - G) * jac;
  resasc *= jac;
  double err = d;
  if (resasc > 0.0 && d > 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * d / resasc, 1.5));
  (void)resabs;
  return Leaf{c, K * jac, Gu * jac, Gv * jac, err, in.extra_err};
}

struct PendingCell {
  Cell c;
  Inspect in;
};

// Mandatory refinement (oscillation / straddle) then batch evaluation.
// Serial BFS decisions keep the leaf order independent of the thread count.
void resolve_and_eval(const Integrand& g, std::vector<Cell> queue, const QuadConfig& cfg,
                      long& evals, bool& capped, std::vector<Leaf>& out) {
  std::vector<PendingCell> keep;
  while (!queue.empty()) {
    std::vector<Cell> next;
    for (const Cell& c : queue) {
      Inspect in = g.inspect(c);
      if (in.skip) continue;
      long planned = evals + static_cast<long>(keep.size() + next.size());
      if (in.force_split && c.depth < cfg.max_depth && planned + 4 <= cfg.max_cells) {
        double hu = 0.5 * c.su, hv = 0.5 * c.sv;
        if (in.axis == 0) {
          next.push_back({c.u0, c.v0, hu, c.sv, c.depth + 1});
          next.push_back({c.u0 + hu, c.v0, hu, c.sv, c.depth + 1});
        } else if (in.axis == 1) {
          next.push_back({c.u0, c.v0, c.su, hv, c.depth + 1});
          next.push_back({c.u0, c.v0 + hv, c.su, hv, c.depth + 1});
        } else {
          next.push_back({c.u0, c.v0, hu, hv, c.depth + 1});
          next.push_back({c.u0 + hu, c.v0, hu, hv, c.depth + 1});
          next.push_back({c.u0, c.v0 + hv, hu, hv, c.depth + 1});
          next.push_back({c.u0 + hu, c.v0 + hv, hu, hv, c.depth + 1});
        }
      } else {
        if (in.force_split && c.depth < cfg.max_depth) capped = true;
        keep.push_back({c, in});
      }
    }
    queue = std::move(next);
  }
  std::size_t base = out.size();
  out.resize(base + keep.size());
  const bool par = cfg.exec == ExecMode::openmp;
#pragma omp parallel for schedule(dynamic, 16) if (par)
  for (long i = 0; i < static_cast<long>(keep.size()); ++i)
    out[base + i] = eval_cell(g, keep[i].c, keep[i].in);
  evals += static_cast<long>(keep.size());
}

QuadratureResult run_adaptive(const Integrand& g, const Cell& root, const QuadConfig& cfg) {
  QuadratureResult res;
  res.lambda = g.lambda;
  long evals = 0;
  bool capped = false;
  std::vector<Leaf> leaves;
  resolve_and_eval(g, {root}, cfg, evals, capped, leaves);

  for (;;) {
    Complex total{0.0, 0.0};
    double err = 0.0, extra = 0.0;
    for (const Leaf& lf : leaves) {
      total += lf.val;
      err += lf.err;
      extra += lf.extra;
    }
    double target = cfg.rel_tol * std::max(std::abs(total), 1e-14);
    res.value = total;
    res.abs_error_estimate = err + extra;
    res.cells_used = std::max(evals, 1L);
    // `extra` is the certified irreducible part (straddle cells at their depth
    // cap); once the rule error is far below it further splitting cannot help.
    double headroom = std::max(target - extra, 0.25 * extra);
    if (err <= headroom) {
      res.tolerance_met = (err + extra <= target) && !capped;
      return res;
    }
    if (capped || evals >= cfg.max_cells) {
      res.tolerance_met = false;
      return res;
    }
    // Greedy: split just enough of the worst cells to close the error
    // deficit, assuming a split removes most of a cell's error.  Whatever
    // survives is picked up by the next round.
    std::vector<std::size_t> order(leaves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (leaves[a].err != leaves[b].err) return leaves[a].err > leaves[b].err;
      return a < b;
    });
    double deficit = err - 0.9 * headroom;
    std::vector<char> chosen(leaves.size(), 0);
    double removed = 0.0;
    for (std::size_t i : order) {
      if (0.9 * removed >= deficit) break;
      if (leaves[i].err <= 0.0) break;
      chosen[i] = 1;
      removed += leaves[i].err;
    }
    std::vector<Cell> children;
    std::vector<Leaf> kept;
    kept.reserve(leaves.size());
    bool any = false;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const Leaf& lf = leaves[i];
      if (chosen[i] && lf.c.depth < cfg.max_depth &&
          evals + static_cast<long>(children.size()) + 4 <= cfg.max_cells) {
        const Cell& c = lf.c;
        double hu = 0.5 * c.su, hv = 0.5 * c.sv;
        children.push_back({c.u0, c.v0, hu, hv, c.depth + 1});
        children.push_back({c.u0 + hu, c.v0, hu, hv, c.depth + 1});
        children.push_back({c.u0, c.v0 + hv, hu, hv, c.depth + 1});
        children.push_back({c.u0 + hu, c.v0 + hv, hu, hv, c.depth + 1});
        any = true;
      } else {
        kept.push_back(lf);
      }
    }
    if (!any) {
      res.tolerance_met = false;
      return res;
    }
    leaves = std::move(kept);
    resolve_and_eval(g, std::move(children), cfg, evals, capped, leaves);
  }
}

// Cartesian oscillatory kernels.  On a mesh that resolves the oscillation,
// local rule errors cancel across cells, so summing per-cell |K-G| magnitudes
// overestimates the true error by many orders of magnitude and provokes
// runaway refinement.  Here the nested-rule differences are summed signed and
// per direction: |sum(K - Gu)| measures the mesh's unresolvedness along u
// (cross-cell cancellation of oscillatory rule error is preserved, while
// coherent smooth-integrand error survives the signed sum), likewise for v.
// Refinement halves every cell along its currently worse direction.
QuadratureResult run_two_mesh(const Integrand& g, const Cell& root, const QuadConfig& cfg) {
  QuadratureResult res;
  res.lambda = g.lambda;
  long evals = 0;
  bool capped = false;
  std::vector<Leaf> leaves;
  resolve_and_eval(g, {root}, cfg, evals, capped, leaves);
  for (;;) {
    Complex T{0.0, 0.0}, Du{0.0, 0.0}, Dv{0.0, 0.0};
    for (const Leaf& lf : leaves) {
      T += lf.val;
      Du += lf.val - lf.gu;
      Dv += lf.val - lf.gv;
    }
    double est = std::abs(Du) + std::abs(Dv);
    res.value = T;
    res.abs_error_estimate = est;
    res.cells_used = std::max(evals, 1L);
    double target = cfg.rel_tol * std::max(std::abs(T), 1e-14);
    if (est <= target) {
      res.tolerance_met = !capped;
      return res;
    }
    if (capped || evals + 2 * static_cast<long>(leaves.size()) > cfg.max_cells) {
      res.tolerance_met = false;
      return res;
    }
    std::vector<Leaf> next;
    std::vector<Cell> children;
    children.reserve(2 * leaves.size());
    for (const Leaf& lf : leaves) {
      const Cell& c = lf.c;
      if (c.depth >= cfg.max_depth) {
        next.push_back(lf);
        continue;
      }
      double du = std::abs(lf.val - lf.gu), dv = std::abs(lf.val - lf.gv);
      int axis;
      if (du > 1.125 * dv)
        axis = 0;
      else if (dv > 1.125 * du)
        axis = 1;
      else  // near-tie: keep the cell close to square
        axis = c.su > c.sv ? 0 : (c.sv > c.su ? 1 : c.depth % 2);
      double hu = 0.5 * c.su, hv = 0.5 * c.sv;
      if (axis == 0) {
        children.push_back({c.u0, c.v0, hu, c.sv, c.depth + 1});
        children.push_back({c.u0 + hu, c.v0, hu, c.sv, c.depth + 1});
      } else {
        children.push_back({c.u0, c.v0, c.su, hv, c.depth + 1});
        children.push_back({c.u0, c.v0 + hv, c.su, hv, c.depth + 1});
      }
    }
    if (children.empty()) {
      res.tolerance_met = false;
      return res;
    }
    resolve_and_eval(g, std::move(children), cfg, evals, capped, next);
    leaves = std::move(next);
  }
}

struct PhaseSet {
  CompiledPhase f, fx, fy, ft;
  explicit PhaseSet(const PolynomialPhase& p)
      : f(p), fx(derivative(p, 0)), fy(derivative(p, 1)), ft(angular_derivative(p)) {}
};

Integrand make_integrand(const PhaseSet& ph, const Amplitude& psi, double lambda,
                         const QuadConfig& cfg, KernelKind kind) {
  Integrand g;
  g.f = &ph.f;
  g.dfx = &ph.fx;
  g.dfy = &ph.fy;
  g.dft = &ph.ft;
  g.psi = &psi;
  g.lambda = lambda;
  g.kind = kind;
  g.polar = (psi.kind == AmplitudeKind::indicator);
  g.support_r = psi.support_radius(cfg.rho);
  g.osc_limit = kTwoPi * cfg.rule_order / cfg.points_per_wavelength;
  return g;
}

Cell root_cell(const Integrand& g, const QuadConfig& cfg) {
  if (g.polar) return Cell{0.0, 0.0, g.psi->radius, kTwoPi, 0};
  return Cell{-cfg.rho, -cfg.rho, 2.0 * cfg.rho, 2.0 * cfg.rho, 0};
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-2))
    throw std::invalid_argument("rel_tol out of [1e-10, 1e-2]");
  if (!(points_per_wavelength >= 4.0))
    throw std::invalid_argument("points_per_wavelength must be >= 4");
  if (max_cells < 1 || rule_order < 1) throw std::invalid_argument("bad quad config");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
}

QuadratureResult integrate_ml(const PolynomialPhase& f, const Amplitude& psi,
                              const MLParams& params, double lambda, const QuadConfig& cfg) {
  cfg.validate();
  params.validate();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  PhaseSet ph(f);
  MLEvaluator ev(params);
  Integrand g = make_integrand(ph, psi, lambda, cfg, KernelKind::ml);
  g.ml = &ev;
  g.ml_tol = std::clamp(cfg.rel_tol * 1e-3, 1e-13, 1e-7);
  if (!g.polar) return run_two_mesh(g, root_cell(g, cfg), cfg);
  return run_adaptive(g, root_cell(g, cfg), cfg);
}

QuadratureResult integrate_classical(const PolynomialPhase& f, const Amplitude& psi,
                                     double lambda, const QuadConfig& cfg) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  PhaseSet ph(f);
  Integrand g = make_integrand(ph, psi, lambda, cfg, KernelKind::classical);
  if (!g.polar) return run_two_mesh(g, root_cell(g, cfg), cfg);
  return run_adaptive(g, root_cell(g, cfg), cfg);
}

QuadratureResult integrate_envelope(const PolynomialPhase& f, const Amplitude& psi,
                                    double lambda, const QuadConfig& cfg, double threshold_M) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  PhaseSet ph(f);
  Integrand g = make_integrand(ph, psi, lambda, cfg, KernelKind::envelope);
  g.thresh_M = threshold_M;
  if (g.polar && threshold_M > 0.0)
    throw std::invalid_argument("restricted envelope requires a smooth amplitude");
  return run_adaptive(g, root_cell(g, cfg), cfg);
}

double dyadic_envelope_bound(const PolynomialPhase& f, const Amplitude& psi, double lambda,
                             const Rational& h, int m, int K, const QuadConfig& cfg,
                             int sublevel_depth) {
  (void)h;
  (void)m;
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  double fmax = sup_abs_bound(f, cfg.rho);
  if (lambda * fmax < 1.0) return 0.0;  // no dyadic shell
  if (std::ldexp(1.0, K) < lambda * fmax)
    throw std::invalid_argument("dyadic range does not cover domain");
  double psinorm = psi.sup_norm(cfg.rho);
  // The bisection error of shell k enters the sum weighted by 2^{-k}, so only
  // the innermost shells need the full depth; relaxing by k/2 keeps the total
  // slack within a constant of the deepest shell at ~2x its cost.
  auto depth_for = [&](int k) { return std::max(12, sublevel_depth - k / 2); };
  SublevelResult prev = sublevel_measure(f, cfg.rho, 1.0 / lambda, depth_for(0), cfg.exec);
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    double eps = std::ldexp(1.0, k + 1) / lambda;
    SublevelResult cur = sublevel_measure(f, cfg.rho, eps, depth_for(k), cfg.exec);
    // certified upper bound for |A_k|
    double shell = std::max(0.0, (cur.measure + cur.error) - (prev.measure - prev.error));
    sum += shell * std::ldexp(1.0, -k);
    prev = cur;
    if (std::ldexp(1.0, k) / lambda >= fmax) break;
  }
  return sum * psinorm;
}

}  // namespace oscml
