// Certified measure of sublevel sets {|f| <= eps} on [-rho,rho]^2 by
// interval bisection: cells proved entirely in or out close immediately,
// undecided cells split to a depth limit and contribute half their area
// with the undecided area as the error bar.
#pragma once

#include "oscml/phase.hpp"

namespace oscml {

enum class ExecMode { serial, openmp };

struct SublevelResult {
  double measure = 0.0;
  double error = 0.0;  // half the undecided area
};

SublevelResult sublevel_measure(const PolynomialPhase& f, double rho, double epsilon,
                                int max_depth = 12, ExecMode exec = ExecMode::openmp);

// Upper bound for max |f| over [-rho,rho]^2 (coefficient-sum bound).
double sup_abs_bound(const PolynomialPhase& f, double rho);

}  // namespace oscml
