// Univariate polynomials over Q: exact gcd, Yun squarefree decomposition,
// Sturm-sequence real root counting.
#pragma once

#include <vector>

#include "oscml/rational.hpp"

namespace oscml {

// Coefficients ascending; invariant: no trailing zero (zero poly = empty).
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& x) const;
  RatPoly derivative() const;
  RatPoly monic() const;

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  bool operator==(const RatPoly& o) const { return c_ == o.c_; }

  // Euclidean division; b nonzero.
  static void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r);
  static RatPoly gcd(RatPoly a, RatPoly b);  // monic gcd

 private:
  std::vector<Rational> c_;
  void normalize();
};

// Yun's algorithm: p = c * prod factors[i].poly ^ factors[i].multiplicity,
// factors squarefree and pairwise coprime, multiplicities strictly increasing
// in construction order (only nontrivial factors are returned).
struct SquarefreeFactor {
  RatPoly poly;
  int multiplicity;
};
std::vector<SquarefreeFactor> squarefree_decompose(const RatPoly& p);

// Number of distinct real roots (Sturm count over (-inf, +inf)).
int count_real_roots(const RatPoly& p);

// Maximal multiplicity over all real roots of p; 0 if no real root.
// p must be nonzero; constants have no roots.
int max_real_root_multiplicity(const RatPoly& p);

}  // namespace oscml
