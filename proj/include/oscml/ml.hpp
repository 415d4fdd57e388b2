// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) on the complex
// plane, with the sector decay ratio used by the envelope bound.
#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "oscml/rational.hpp"

namespace oscml {

using Complex = std::complex<double>;

struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;

  // Throws std::invalid_argument("unsupported (alpha,beta)") unless
  // 0 < alpha <= 1 and beta > 0.
  void validate() const;
};

struct SeriesOverflow : std::runtime_error {
  SeriesOverflow() : std::runtime_error("series overflow; use ml_eval") {}
};
struct SectorViolation : std::runtime_error {
  SectorViolation() : std::runtime_error("sector condition violated") {}
};

// 1/Gamma(x) for real x (entire; zero at nonpositive integers).
double reciprocal_gamma(double x);

// Plain truncated series sum_{k<n_terms} z^k / Gamma(alpha k + beta),
// ascending k.  Throws SeriesOverflow if a term or partial sum leaves the
// double range before convergence.
Complex ml_series(const MLParams& p, Complex z, int n_terms);

// Reusable evaluator: precomputes reciprocal-gamma tables for one (alpha,
// beta).  eval() is const and thread-safe.
class MLEvaluator {
 public:
  explicit MLEvaluator(MLParams p);

  // Relative accuracy `tol` in [1e-14, 1e-6].  Strategy: double series for
  // small |z|, exponentially-improved algebraic expansion
  // -sum z^{-k}/Gamma(beta - alpha k) (plus the exponential term inside
  // |arg z| < pi*alpha) for large |z|, extended-precision series in between.
  Complex eval(Complex z, double tol) const;

  const MLParams& params() const { return p_; }

 private:
  MLParams p_;
  std::vector<double> rg_series_;  // Gamma(alpha k+beta)/Gamma(alpha(k+1)+beta)
  std::vector<double> rg_asym_;    // 1/Gamma(beta - alpha k)
  struct ExtTable;  // lazily built 50-digit 1/Gamma table, atomic access
  mutable std::shared_ptr<const ExtTable> ext_;

  Complex series_double(Complex z, double tol) const;
  Complex series_extended(Complex z) const;
  Complex asymptotic(Complex z, double tol) const;
};

Complex ml_eval(const MLParams& p, Complex z, double tol);

// |E_{alpha,beta}(i t)| * (1 + |t|); requires alpha < 1 so that the
// imaginary axis lies inside the decay sector.
double ml_bound_ratio(const MLParams& p, double t);

}  // namespace oscml
