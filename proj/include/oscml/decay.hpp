// Lambda/epsilon sweeps, power-log fits, and numerical verification of the
// decay and sublevel-measure bounds.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oscml/newton.hpp"
#include "oscml/quadrature.hpp"
#include "oscml/sublevel.hpp"

namespace oscml {

struct DecaySample {
  double lambda = 0.0;
  double abs_value = 0.0;
  double error_estimate = 0.0;
  double ratio = 0.0;  // |I| * lambda^{1/h} / ln^{m'} lambda
  bool tolerance_met = true;
};

struct FitResult {
  double p = 0.0;  // decay exponent
  double q = 0.0;  // logarithm power
  double log_c = 0.0;
  double residual = 0.0;
};

struct DecayReport {
  std::vector<DecaySample> samples;
  int excluded = 0;  // samples that missed the quadrature tolerance
  bool fit_done = false;
  FitResult fit;
  double bound_ratio_max = 0.0;
  Rational h_used;
  int m_used = 0;
  bool branch_h1 = false;  // bound uses ln^2 when h == 1
};

struct SublevelSample {
  double epsilon = 0.0;
  double measure = 0.0;
  double measure_error = 0.0;
};

enum class DeltaRegime { below_one, equal_one, above_one };

struct SublevelReport {
  std::vector<SublevelSample> samples;
  bool fit_done = false;
  double fitted_delta = 0.0;
  double fitted_logpow = 0.0;
  double residual = 0.0;
  DeltaRegime regime = DeltaRegime::equal_one;
};

struct Verdict {
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> kv;
  std::string str() const;  // key=value block, one pair per line
};

std::vector<double> geometric_grid(double lo, double hi, int n);

// Least-squares fit ln y = log_c - p ln x + q ln ln x.  Requires >= 8 samples
// with x >= 2; throws on a singular design matrix.
FitResult fit_decay(const std::vector<std::pair<double, double>>& samples);

DecayReport lambda_sweep(const PolynomialPhase& f, const Amplitude& psi, const MLParams& params,
                         const std::vector<double>& grid, const QuadConfig& cfg,
                         const Rational& h, int m);

// Measure {|f| <= eps} across the grid and fit the epsilon power law.
// delta = 1/h and m classify the expected regime.
SublevelReport epsilon_sweep(const PolynomialPhase& f, const std::vector<double>& eps_grid,
                             double rho, int depth, ExecMode exec, const Rational& delta, int m);

// PASS iff the bound ratio trend is non-growing (slope <= 0.05 per decade).
Verdict verify_theorem1(const DecayReport& report);

struct MorseSample {
  double lambda = 0.0;
  double near_measure = 0.0;   // |{lambda |f| <= M}|
  double near_ratio = 0.0;     // against C/lambda resp. C ln(lambda)/lambda
  double far_envelope = 0.0;   // envelope integral over {lambda |f| >= M}
  double far_ratio = 0.0;      // against C ln / resp. C ln^2 over lambda
};

struct MorseReport {
  char sign = '+';
  std::vector<MorseSample> samples;
  Verdict verdict;
};

// Morse model phases x^2 +- y^2 with the split at lambda |f| = M.
MorseReport morse_case_check(char sign, const std::vector<double>& lambda_grid,
                             const QuadConfig& cfg, double M = 1.0);

// Trend slope of ln(values) against log10(xs); used by the verdicts.
double trend_slope_per_decade(const std::vector<double>& xs, const std::vector<double>& values);

}  // namespace oscml
