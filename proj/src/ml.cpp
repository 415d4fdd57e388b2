#include "oscml/ml.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oscml {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSeriesTable = 1400;
constexpr int kAsymTable = 64;

// sin(pi x) without large-argument cancellation.
double sin_pi(double x) {
  double n = std::round(x);
  double r = x - n;
  double s = std::sin(kPi * r);
  return (static_cast<long long>(n) % 2 != 0) ? -s : s;
}

}  // namespace

void MLParams::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0 || !(beta > 0.0))
    throw std::invalid_argument("unsupported (alpha,beta)");
}

double reciprocal_gamma(double x) {
  if (x > 0.5) {
    double lg = std::lgamma(x);
    return lg > 709.0 ? 0.0 : std::exp(-lg);
  }
  if (x <= 0.0 && x == std::floor(x)) return 0.0;  // pole of Gamma
  // Reflection: 1/Gamma(x) = sin(pi x)/pi * Gamma(1-x).
  double lg = std::lgamma(1.0 - x);
  double s = sin_pi(x) / kPi;
  if (lg > 700.0) {
    double v = s * std::exp(700.0);
    return v * std::exp(lg - 700.0);
  }
  return s * std::exp(lg);
}

Complex ml_series(const MLParams& p, Complex z, int n_terms) {
  p.validate();
  if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
  Complex sum = 0.0, zk = 1.0;
  for (int k = 0; k < n_terms; ++k) {
    Complex term = zk * reciprocal_gamma(p.alpha * k + p.beta);
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()) ||
        !std::isfinite(zk.real()) || !std::isfinite(zk.imag()))
      throw SeriesOverflow();
    zk *= z;
  }
  return sum;
}

MLEvaluator::MLEvaluator(MLParams p) : p_(std::move(p)) {
  p_.validate();
  if (p_.alpha == 1.0 && p_.beta == 1.0) return;  // exp fast path only
  // rg_series_[k] = Gamma(alpha k + beta) / Gamma(alpha (k+1) + beta), so the
  // series can advance term-by-term without z^k or 1/Gamma leaving the double
  // range on their own.
  rg_series_.resize(kSeriesTable);
  for (int k = 0; k < kSeriesTable; ++k)
    rg_series_[k] = boost::math::tgamma_delta_ratio(p_.alpha * k + p_.beta, p_.alpha);
  rg_asym_.resize(kAsymTable);
  for (int k = 0; k < kAsymTable; ++k)
    rg_asym_[k] = reciprocal_gamma(p_.beta - p_.alpha * k);
}

Complex MLEvaluator::series_double(Complex z, double tol) const {
  Complex sum = 0.0;
  Complex term = Complex(reciprocal_gamma(p_.beta), 0.0);
  double az = std::abs(z);
  double kpeak = std::pow(az, 1.0 / p_.alpha) / p_.alpha;  // largest-term index
  int calm = 0;
  for (int k = 0; k < kSeriesTable; ++k) {
    sum += term;
    double tm = std::abs(term);
    if (k > kpeak && tm <= 0.05 * tol * std::abs(sum)) {
      if (++calm >= 2) break;
    } else {
      calm = 0;
    }
    term *= z * rg_series_[k];
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) break;
  }
  return sum;
}

namespace {

// The series for |z| in the middle zone peaks near index |z|^{1/alpha}/alpha
// with terms as large as exp(|z|^{1/alpha}) while the sum itself is O(1), so
// the working precision must scale with the cancellation depth.
template <class F>
Complex series_ext_impl(double alpha, double beta, Complex z, int digits10) {
  struct C {
    F re, im;
  };
  const C zz{F(z.real()), F(z.imag())};
  C sum{0, 0}, zk{1, 0};
  double az = std::abs(z);
  double peak = std::pow(az, 1.0 / alpha);
  double kpeak = peak / alpha;  // index of the largest term
  int kend = static_cast<int>(3.0 * kpeak) + 120;
  F maxmag = 0;
  const F cutoff = pow(F(10), -(digits10 - 8));
  for (int k = 0; k <= kend; ++k) {
    F rg = 1 / boost::math::tgamma(F(alpha) * k + F(beta));
    C term{zk.re * rg, zk.im * rg};
    sum.re += term.re;
    sum.im += term.im;
    F mag = abs(term.re) + abs(term.im);
    if (mag > maxmag) maxmag = mag;
    if (k > kpeak && mag < maxmag * cutoff) break;
    zk = C{zk.re * zz.re - zk.im * zz.im, zk.re * zz.im + zk.im * zz.re};
  }
  return {static_cast<double>(sum.re), static_cast<double>(sum.im)};
}

template <int D>
using big_float =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<D>,
                                  boost::multiprecision::et_off>;

using mpf50 = big_float<50>;

}  // namespace

struct MLEvaluator::ExtTable {
  std::vector<mpf50> rg;  // 1/Gamma(alpha k + beta) at 50 digits
};

Complex MLEvaluator::series_extended(Complex z) const {
  double peak = std::pow(std::abs(z), 1.0 / p_.alpha);
  double needed = peak / 2.302585 + 30.0;  // cancellation digits + headroom
  if (needed > 50.0) {
    if (needed <= 100.0) return series_ext_impl<big_float<100>>(p_.alpha, p_.beta, z, 100);
    if (needed <= 200.0) return series_ext_impl<big_float<200>>(p_.alpha, p_.beta, z, 200);
    return series_ext_impl<big_float<400>>(p_.alpha, p_.beta, z, 400);
  }
  double kpeak = peak / p_.alpha;
  int kend = static_cast<int>(3.0 * kpeak) + 120;
  auto tab = std::atomic_load_explicit(&ext_, std::memory_order_acquire);
  if (!tab || static_cast<int>(tab->rg.size()) <= kend) {
    auto fresh = std::make_shared<ExtTable>();
    fresh->rg.resize(kend + 1);
    for (int k = 0; k <= kend; ++k)
      fresh->rg[k] = 1 / boost::math::tgamma(mpf50(p_.alpha) * k + mpf50(p_.beta));
    std::atomic_store_explicit(&ext_, std::shared_ptr<const ExtTable>(fresh),
                               std::memory_order_release);
    tab = fresh;
  }
  struct C {
    mpf50 re, im;
  };
  const C zz{mpf50(z.real()), mpf50(z.imag())};
  C sum{0, 0}, zk{1, 0};
  mpf50 maxmag = 0;
  const mpf50 cutoff = pow(mpf50(10), -42);
  for (int k = 0; k <= kend; ++k) {
    const mpf50& rg = tab->rg[k];
    C term{zk.re * rg, zk.im * rg};
    sum.re += term.re;
    sum.im += term.im;
    mpf50 mag = abs(term.re) + abs(term.im);
    if (mag > maxmag) maxmag = mag;
    if (k > kpeak && mag < maxmag * cutoff) break;
    zk = C{zk.re * zz.re - zk.im * zz.im, zk.re * zz.im + zk.im * zz.re};
  }
  return {static_cast<double>(sum.re), static_cast<double>(sum.im)};
}

Complex MLEvaluator::asymptotic(Complex z, double tol) const {
  Complex zinv = 1.0 / z;
  Complex sum = 0.0, zk = zinv, best_sum = 0.0;
  double minmag = std::numeric_limits<double>::infinity();
  double floor = tol * 1e-2 / (1.0 + std::abs(z));
  for (int k = 1; k < kAsymTable; ++k) {
    Complex term = zk * rg_asym_[k];
    zk *= zinv;
    double m = std::abs(term);
    if (m == 0.0) continue;  // pole of Gamma(beta - alpha k): term absent
    // Term magnitudes wiggle (rg oscillates through Gamma poles), so optimal
    // truncation keys off sustained growth over the running minimum and rolls
    // back to the partial sum at the smallest term.
    if (m > 10.0 * minmag) {
      sum = best_sum;
      break;
    }
    sum += term;
    if (m < minmag) {
      minmag = m;
      best_sum = sum;
    }
    if (m < floor) break;
  }
  Complex result = -sum;
  // Exponential term (1/alpha) z^{(1-beta)/alpha} exp(z^{1/alpha}): present
  // inside |arg z| < pi*alpha (dominant up to pi*alpha/2, then recessive,
  // vanishing to exp(-|z|^{1/alpha}) at the sector edge).
  double arg = std::arg(z);
  if (std::abs(arg) < kPi * p_.alpha) {
    Complex zr = std::pow(z, 1.0 / p_.alpha);
    if (zr.real() < 700.0) {
      Complex ex = std::exp(zr) / p_.alpha;
      if (p_.beta != 1.0) ex *= std::pow(z, (1.0 - p_.beta) / p_.alpha);
      result += ex;
    } else {
      result = Complex(std::numeric_limits<double>::infinity(), 0.0);
    }
  }
  return result;
}

Complex MLEvaluator::eval(Complex z, double tol) const {
  tol = std::clamp(tol, 1e-14, 1e-6);
  if (p_.alpha == 1.0 && p_.beta == 1.0) return std::exp(z);
  double az = std::abs(z);
  if (az < 0.5) return series_double(z, tol);
  // The series terms peak near exp(|z|^{1/alpha}); the value itself is about
  // exp(|z|^{1/alpha} cos(arg/alpha)) in the exponential sector and
  // O(1/(1+|z|)) outside it.
  double peak = std::pow(az, 1.0 / p_.alpha);
  double arg = std::abs(std::arg(z));
  double cosfac = (arg < kPi * p_.alpha) ? std::cos(arg / p_.alpha) : -1.0;
  double log_est = std::max(peak * cosfac, -std::log1p(az));  // log |E| estimate
  double log_tol = std::log(tol);
  if (peak + std::log(3e-16) <= log_tol + log_est) return series_double(z, tol);
  if (-0.9 * peak + std::log(10.0) <= log_tol + log_est && az >= 1.5)
    return asymptotic(z, tol);
  return series_extended(z);
}

Complex ml_eval(const MLParams& p, Complex z, double tol) {
  return MLEvaluator(p).eval(z, tol);
}

double ml_bound_ratio(const MLParams& p, double t) {
  p.validate();
  if (p.alpha >= 1.0) throw SectorViolation();
  Complex v = ml_eval(p, Complex(0.0, t), 1e-12);
  return std::abs(v) * (1.0 + std::abs(t));
}

}  // namespace oscml
