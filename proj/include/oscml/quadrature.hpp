// Oscillation-aware adaptive 2D quadrature for the three integrals:
// the Mittag-Leffler integral, the classical oscillatory integral, and the
// non-oscillatory envelope integral with its dyadic majorant.
#pragma once

#include "oscml/ml.hpp"
#include "oscml/phase.hpp"
#include "oscml/sublevel.hpp"

namespace oscml {

struct QuadConfig {
  double rel_tol = 1e-6;
  long max_cells = 10000000;
  double points_per_wavelength = 4.0;
  int rule_order = 15;
  double rho = 1.0;  // working domain [-rho,rho]^2
  int max_depth = 30;
  ExecMode exec = ExecMode::openmp;

  void validate() const;
};

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  long cells_used = 0;
  double lambda = 0.0;
  bool tolerance_met = true;
};

// integral of E_{alpha,beta}(i lambda f(x)) psi(x) over U
QuadratureResult integrate_ml(const PolynomialPhase& f, const Amplitude& psi,
                              const MLParams& params, double lambda, const QuadConfig& cfg);

// integral of e^{i lambda f(x)} psi(x) over U
QuadratureResult integrate_classical(const PolynomialPhase& f, const Amplitude& psi,
                                     double lambda, const QuadConfig& cfg);

// integral of |psi(x)| / (1 + lambda |f(x)|); with threshold_M > 0 the domain
// is restricted to {lambda |f| >= threshold_M}.
QuadratureResult integrate_envelope(const PolynomialPhase& f, const Amplitude& psi,
                                    double lambda, const QuadConfig& cfg,
                                    double threshold_M = 0.0);

// Dyadic shell majorant sum_k |A_k| 2^{-k} ||psi||_inf over the shells
// A_k = {2^k/lambda <= |f| <= 2^{k+1}/lambda}; uses certified upper bounds for
// the shell measures.  Throws if 2^K < lambda * max|f|.
double dyadic_envelope_bound(const PolynomialPhase& f, const Amplitude& psi, double lambda,
                             const Rational& h, int m, int K, const QuadConfig& cfg,
                             int sublevel_depth = 12);

}  // namespace oscml
