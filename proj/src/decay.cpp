#include "oscml/decay.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oscml {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Solve the 3x3 normal equations A x = b by Gaussian elimination.
void solve3(double A[3][3], double b[3], double x[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    double d = A[idx[col]][col];
    if (std::abs(d) < 1e-12) throw std::runtime_error("singular design matrix (degenerate grid)");
    for (int r = col + 1; r < 3; ++r) {
      double f = A[idx[r]][col] / d;
      for (int c2 = col; c2 < 3; ++c2) A[idx[r]][c2] -= f * A[idx[col]][c2];
      b[idx[r]] -= f * b[idx[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double s = b[idx[col]];
    for (int c2 = col + 1; c2 < 3; ++c2) s -= A[idx[col]][c2] * x[c2];
    x[col] = s / A[idx[col]][col];
  }
}

}  // namespace

std::string Verdict::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
  os << "verdict=" << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || hi < lo) throw std::invalid_argument("bad geometric grid");
  std::vector<double> g;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

FitResult fit_decay(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 8) throw std::invalid_argument("fit requires >= 8 samples");
  double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double b[3] = {0, 0, 0};
  for (const auto& [x, y] : samples) {
    if (!(x >= 2.0)) throw std::invalid_argument("fit requires x >= 2");
    if (!(y > 0.0)) throw std::invalid_argument("fit requires positive values");
    double r[3] = {1.0, -std::log(x), std::log(std::log(x))};
    double ly = std::log(y);
    for (int i = 0; i < 3; ++i) {
      for (int l = 0; l < 3; ++l) A[i][l] += r[i] * r[l];
      b[i] += r[i] * ly;
    }
  }
  double sol[3];
  solve3(A, b, sol);
  FitResult fit;
  fit.log_c = sol[0];
  fit.p = sol[1];
  fit.q = sol[2];
  double ss = 0.0;
  for (const auto& [x, y] : samples) {
    double pred = sol[0] - sol[1] * std::log(x) + sol[2] * std::log(std::log(x));
    double d = std::log(y) - pred;
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / samples.size());
  return fit;
}

// Exponent of an extra log factor: slope of ln(values) against ln ln x.
// A ratio approaching a constant gives a small coefficient; a missing or
// excess ln^q factor shows up as a coefficient near q.
static double loglog_exponent(const std::vector<double>& xs, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    double x = std::log(std::log(xs[i])), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("trend needs >= 2 positive values");
  double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-12) throw std::runtime_error("degenerate trend grid");
  return (n * sxy - sx * sy) / den;
}

double trend_slope_per_decade(const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size() || xs.size() < 2)
    throw std::invalid_argument("trend needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(values[i] > 0.0)) continue;
    double x = std::log10(xs[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("trend needs >= 2 positive values");
  double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-12) throw std::runtime_error("degenerate trend grid");
  return (n * sxy - sx * sy) / den;
}

DecayReport lambda_sweep(const PolynomialPhase& f, const Amplitude& psi, const MLParams& params,
                         const std::vector<double>& grid, const QuadConfig& cfg,
                         const Rational& h, int m) {
  if (!(h > 0)) throw std::invalid_argument("h must be positive");
  DecayReport rep;
  rep.h_used = h;
  rep.m_used = m;
  rep.branch_h1 = (h == 1);
  int mprime = rep.branch_h1 ? 2 : m;
  double inv_h = 1.0 / to_double(h);
  for (double lam : grid) {
    QuadratureResult r = integrate_ml(f, psi, params, lam, cfg);
    DecaySample s;
    s.lambda = lam;
    s.abs_value = std::abs(r.value);
    s.error_estimate = r.abs_error_estimate;
    s.tolerance_met = r.tolerance_met;
    if (!r.tolerance_met) ++rep.excluded;
    s.ratio = s.abs_value * std::pow(lam, inv_h) / std::pow(std::log(lam), mprime);
    rep.samples.push_back(s);
  }
  double rmax = 0.0;
  std::vector<std::pair<double, double>> fit_pts;
  for (const auto& s : rep.samples)
    if (s.tolerance_met) {
      rmax = std::max(rmax, s.ratio);
      if (s.abs_value > 0.0) fit_pts.emplace_back(s.lambda, s.abs_value);
    }
  rep.bound_ratio_max = rmax;
  if (fit_pts.size() >= 8) {
    rep.fit = fit_decay(fit_pts);
    rep.fit_done = true;
  }
  return rep;
}

SublevelReport epsilon_sweep(const PolynomialPhase& f, const std::vector<double>& eps_grid,
                             double rho, int depth, ExecMode exec, const Rational& delta,
                             int m) {
  (void)m;
  SublevelReport rep;
  for (double eps : eps_grid) {
    SublevelResult r = sublevel_measure(f, rho, eps, depth, exec);
    rep.samples.push_back({eps, r.measure, r.error});
  }
  if (delta < 1)
    rep.regime = DeltaRegime::below_one;
  else if (delta == 1)
    rep.regime = DeltaRegime::equal_one;
  else
    rep.regime = DeltaRegime::above_one;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : rep.samples)
    if (s.measure > 0.0 && s.epsilon < 0.5) pts.emplace_back(1.0 / s.epsilon, s.measure);
  if (pts.size() >= 8) {
    FitResult fit = fit_decay(pts);
    rep.fitted_delta = fit.p;
    rep.fitted_logpow = fit.q;
    rep.residual = fit.residual;
    rep.fit_done = true;
  }
  return rep;
}

Verdict verify_theorem1(const DecayReport& report) {
  Verdict v;
  std::vector<double> xs, ratios;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const auto& s : report.samples)
    if (s.tolerance_met && s.ratio > 0.0) {
      xs.push_back(s.lambda);
      ratios.push_back(s.ratio);
      rmin = std::min(rmin, s.ratio);
      rmax = std::max(rmax, s.ratio);
    }
  v.kv.emplace_back("branch", report.branch_h1 ? "h=1" : "h>1");
  v.kv.emplace_back("h", rat_str(report.h_used));
  v.kv.emplace_back("m", std::to_string(report.m_used));
  v.kv.emplace_back("bound_ratio_max", fmt(report.bound_ratio_max));
  v.kv.emplace_back("samples_used", std::to_string(xs.size()));
  v.kv.emplace_back("samples_excluded", std::to_string(report.excluded));
  if (xs.size() < 2) {
    v.kv.emplace_back("note", "too few samples for a trend");
    v.pass = false;
    return v;
  }
  // The bound is asymptotic, so growth is measured on the tail half of the
  // grid: a bounded ratio that approaches its constant from below would
  // otherwise register its transient as growth, while a genuinely missing
  // log factor still shows a tail slope an order of magnitude above the gate.
  std::size_t tail = xs.size() / 2;
  std::vector<double> txs(xs.begin() + tail, xs.end());
  std::vector<double> trs(ratios.begin() + tail, ratios.end());
  double slope = trend_slope_per_decade(txs, trs);
  v.kv.emplace_back("ratio_slope_per_decade", fmt(slope));
  v.kv.emplace_back("ratio_max_over_min", fmt(rmax / rmin));
  v.pass = slope <= 0.05;
  return v;
}

MorseReport morse_case_check(char sign, const std::vector<double>& lambda_grid,
                             const QuadConfig& cfg, double M) {
  if (sign != '+' && sign != '-') throw std::invalid_argument("sign must be '+' or '-'");
  MorseReport rep;
  rep.sign = sign;
  PolynomialPhase f;
  f.add_term(2, 0, 1);
  f.add_term(0, 2, sign == '+' ? 1 : -1);
  Amplitude psi = Amplitude::bump_of(0.5 * cfg.rho);
  std::vector<double> xs, near_ratios, far_ratios;
  for (double lam : lambda_grid) {
    MorseSample s;
    s.lambda = lam;
    SublevelResult near = sublevel_measure(f, cfg.rho, M / lam, 13, cfg.exec);
    s.near_measure = near.measure;
    double ln = std::log(lam);
    s.near_ratio = sign == '+' ? near.measure * lam : near.measure * lam / ln;
    QuadratureResult env = integrate_envelope(f, psi, lam, cfg, M);
    s.far_envelope = env.value.real();
    s.far_ratio = sign == '+' ? s.far_envelope * lam / ln : s.far_envelope * lam / (ln * ln);
    rep.samples.push_back(s);
    xs.push_back(lam);
    near_ratios.push_back(s.near_ratio);
    far_ratios.push_back(s.far_ratio);
  }
  Verdict& v = rep.verdict;
  v.kv.emplace_back("sign", std::string(1, sign));
  v.kv.emplace_back("M", fmt(M));
  // Boundedness check: a ratio that converges to its constant from below has
  // a small positive ln-ln exponent, while a genuinely missing or excess log
  // factor shows an exponent near 1.
  double q1 = loglog_exponent(xs, near_ratios);
  double q2 = loglog_exponent(xs, far_ratios);
  v.kv.emplace_back("near_ratio_log_exponent", fmt(q1));
  v.kv.emplace_back("far_ratio_log_exponent", fmt(q2));
  v.pass = q1 <= 0.5 && q2 <= 0.5;
  return rep;
}

}  // namespace oscml
