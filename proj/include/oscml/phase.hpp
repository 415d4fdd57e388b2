// Sparse bivariate polynomial phases with exact rational coefficients,
// plus the amplitude kinds used by the integrals.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oscml/rational.hpp"

namespace oscml {

using Exponent = std::pair<int, int>;  // (j, k) powers of x1, x2

struct MonomialTerm {
  int j = 0;
  int k = 0;
  Rational coeff;  // nonzero
};

class PolynomialPhase {
 public:
  PolynomialPhase() = default;
  explicit PolynomialPhase(std::vector<MonomialTerm> terms);

  // Adds c * x1^j * x2^k, combining like terms; zero results drop out.
  void add_term(int j, int k, const Rational& c);

  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Exponent pairs with nonzero coefficient, sorted by (j,k).
  std::vector<Exponent> taylor_support() const;

  // True when no term has j+k <= 1, i.e. f(0,0)=0 and grad f(0,0)=0.
  bool is_normalized() const;

  bool operator==(const PolynomialPhase& o) const { return terms_ == o.terms_; }

 private:
  std::map<Exponent, Rational> terms_;
};

struct PhaseParseError : std::runtime_error {
  std::size_t offset;
  PhaseParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

// Grammar: signed sum of `c`, `c*x^j`, `c*y^k`, `c*x^j*y^k`; coefficients are
// integers, decimals (read exactly) or fractions p/q; `*` between factors is
// optional.  Throws PhaseParseError with the byte offset of the problem.
PolynomialPhase parse_phase(const std::string& text);

// Canonical printed form: terms sorted by (j,k), coefficients as p/q.
// parse_phase(print_phase(f)) == f.
std::string print_phase(const PolynomialPhase& f);

// Deterministic Horner evaluation (outer x1, inner x2, ascending exponents).
double eval_phase(const PolynomialPhase& f, double x1, double x2);

// Exact partial derivative with respect to x1 (var == 0) or x2 (var == 1);
// may be empty.
PolynomialPhase derivative(const PolynomialPhase& f, int var);

// x1 * df/dx2 - x2 * df/dx1: the angular derivative of f along circles.
PolynomialPhase angular_derivative(const PolynomialPhase& f);

// Flattened double-coefficient copy for hot loops.
struct CompiledPhase {
  struct Term {
    int j, k;
    double c;
  };
  std::vector<Term> terms;
  int max_j = 0, max_k = 0;

  explicit CompiledPhase(const PolynomialPhase& f);
  double eval(double x, double y) const;
  // Bounds on |df/dx1| and |df/dx2| over |x1|<=ax, |x2|<=ay.
  double grad1_bound(double ax, double ay) const;
  double grad2_bound(double ax, double ay) const;
  double abs_bound(double ax, double ay) const;
};

// --- Amplitudes ------------------------------------------------------------

enum class AmplitudeKind { bump, indicator, polynomial };

struct Amplitude {
  AmplitudeKind kind = AmplitudeKind::bump;
  double sigma = 1.0;   // bump: ==1 for |x|<=sigma, ==0 for |x|>=2*sigma
  double radius = 1.0;  // indicator: disk of this radius
  PolynomialPhase poly;

  static Amplitude bump_of(double sigma);
  static Amplitude indicator_of(double radius);
  static Amplitude polynomial_of(PolynomialPhase p);

  // Supremum of |psi| over the closed working domain; polynomial amplitudes
  // are densely sampled (1024^2) with a 5% safety factor.
  double sup_norm(double rho) const;
  // Radius beyond which the amplitude vanishes (2*sigma, radius, or rho*sqrt2).
  double support_radius(double rho) const;
};

double eval_amplitude(const Amplitude& a, double x1, double x2);

}  // namespace oscml
