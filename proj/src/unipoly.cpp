#include "oscml/unipoly.hpp"

#include <stdexcept>

namespace oscml {

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

void RatPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RatPoly::eval(const Rational& x) const {
  Rational v = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<int>(i));
  return RatPoly(std::move(d));
}

RatPoly RatPoly::monic() const {
  if (is_zero()) return {};
  std::vector<Rational> d = c_;
  Rational lead = c_.back();
  for (auto& x : d) x /= lead;
  return RatPoly(std::move(d));
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return RatPoly(std::move(c));
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t l = 0; l < b.c_.size(); ++l) c[i + l] += a.c_[i] * b.c_[l];
  return RatPoly(std::move(c));
}

void RatPoly::divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
  if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
  std::vector<Rational> rem = a.c_;
  int db = b.degree();
  std::vector<Rational> quo;
  if (a.degree() >= db) quo.assign(a.degree() - db + 1, Rational(0));
  while (static_cast<int>(rem.size()) - 1 >= db && !rem.empty()) {
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
    int dr = static_cast<int>(rem.size()) - 1;
    if (dr < db) break;
    Rational f = rem.back() / b.c_.back();
    quo[dr - db] = f;
    for (int i = 0; i <= db; ++i) rem[dr - db + i] -= f * b.c_[i];
    rem.pop_back();
  }
  q = RatPoly(std::move(quo));
  r = RatPoly(std::move(rem));
}

RatPoly RatPoly::gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<SquarefreeFactor> squarefree_decompose(const RatPoly& p) {
  std::vector<SquarefreeFactor> out;
  if (p.degree() < 1) return out;
  // Yun's algorithm.
  RatPoly a = p.monic();
  RatPoly d = a.derivative();
  RatPoly g = RatPoly::gcd(a, d);
  RatPoly q, r;
  RatPoly::divmod(a, g, q, r);  // b1 = a/g
  RatPoly b = q;
  RatPoly::divmod(d, g, q, r);  // c1 = a'/g
  RatPoly c = q - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    RatPoly fi = RatPoly::gcd(b, c);
    if (fi.degree() > 0) out.push_back({fi, i});
    RatPoly::divmod(b, fi, q, r);
    b = q;
    RatPoly::divmod(c, fi, q, r);
    c = q - b.derivative();
    ++i;
  }
  return out;
}

namespace {

int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Sign of p at +inf (dir=+1) or -inf (dir=-1).
int sign_at_infinity(const RatPoly& p, int dir) {
  if (p.is_zero()) return 0;
  int s = sign_of(p.leading());
  if (dir < 0 && p.degree() % 2 == 1) s = -s;
  return s;
}

int sign_variations(const std::vector<int>& signs) {
  int v = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

}  // namespace

int count_real_roots(const RatPoly& p) {
  if (p.degree() < 1) return 0;
  // Sturm chain on the squarefree part.
  RatPoly sf = p;
  RatPoly g = RatPoly::gcd(p, p.derivative());
  if (g.degree() > 0) {
    RatPoly q, r;
    RatPoly::divmod(p, g, q, r);
    sf = q;
  }
  std::vector<RatPoly> chain{sf, sf.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() >= 0) {
    RatPoly q, r;
    RatPoly::divmod(chain[chain.size() - 2], chain.back(), q, r);
    if (r.is_zero()) break;
    // negate remainder
    RatPoly neg = RatPoly() - r;
    chain.push_back(std::move(neg));
  }
  std::vector<int> lo, hi;
  for (const auto& c : chain) {
    lo.push_back(sign_at_infinity(c, -1));
    hi.push_back(sign_at_infinity(c, +1));
  }
  return sign_variations(lo) - sign_variations(hi);
}

int max_real_root_multiplicity(const RatPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial");
  int best = 0;
  for (const auto& f : squarefree_decompose(p))
    if (count_real_roots(f.poly) > 0) best = std::max(best, f.multiplicity);
  return best;
}

}  // namespace oscml
