#include "oscml/phase.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace oscml {

PolynomialPhase::PolynomialPhase(std::vector<MonomialTerm> terms) {
  for (const auto& t : terms) add_term(t.j, t.k, t.coeff);
}

void PolynomialPhase::add_term(int j, int k, const Rational& c) {
  if (j < 0 || k < 0) throw std::invalid_argument("negative exponent");
  if (c == 0) return;
  auto key = Exponent{j, k};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::vector<Exponent> PolynomialPhase::taylor_support() const {
  std::vector<Exponent> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back(e);
  return out;
}

bool PolynomialPhase::is_normalized() const {
  for (const auto& [e, c] : terms_)
    if (e.first + e.second <= 1) return false;
  return true;
}

// --- parser ----------------------------------------------------------------

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) { throw PhaseParseError(msg, pos); }
};

Integer parse_digits(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
  if (c.pos == start) c.fail("expected digits");
  return Integer(c.s.substr(start, c.pos - start));
}

// Integer, exact decimal, or p/q fraction.
Rational parse_number(Cursor& c) {
  Integer ip = parse_digits(c);
  Rational v(ip);
  if (c.pos < c.s.size() && c.s[c.pos] == '.') {
    ++c.pos;
    std::size_t start = c.pos;
    Integer frac = parse_digits(c);
    std::size_t ndig = c.pos - start;
    Integer den = 1;
    for (std::size_t i = 0; i < ndig; ++i) den *= 10;
    v += Rational(frac, den);
  }
  if (c.peek() == '/') {
    ++c.pos;
    Integer q = parse_digits(c);
    if (q == 0) c.fail("zero denominator");
    v /= Rational(q);
  }
  return v;
}

int parse_exponent(Cursor& c) {
  if (c.peek() != '^') return 1;
  ++c.pos;
  Integer e = parse_digits(c);
  if (e > 64) c.fail("exponent too large");
  return static_cast<int>(e);
}

// One signed product of number/variable factors.
void parse_term(Cursor& c, int sign, PolynomialPhase& out) {
  Rational coeff = sign;
  int j = 0, k = 0;
  bool any = false;
  for (;;) {
    char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      coeff *= parse_number(c);
      any = true;
    } else if (ch == 'x' || ch == 'X') {
      ++c.pos;
      j += parse_exponent(c);
      any = true;
    } else if (ch == 'y' || ch == 'Y') {
      ++c.pos;
      k += parse_exponent(c);
      any = true;
    } else if (!any) {
      c.fail("expected term");
    } else {
      break;
    }
    if (c.peek() == '*') {
      ++c.pos;
      continue;
    }
    char nxt = c.peek();
    if (nxt == 'x' || nxt == 'X' || nxt == 'y' || nxt == 'Y' ||
        std::isdigit(static_cast<unsigned char>(nxt)))
      continue;  // juxtaposition
    break;
  }
  out.add_term(j, k, coeff);
}

}  // namespace

PolynomialPhase parse_phase(const std::string& text) {
  Cursor c{text};
  PolynomialPhase out;
  if (c.eof()) c.fail("empty input");
  for (;;) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+' || ch == '-') {
      sign = ch == '-' ? -1 : 1;
      ++c.pos;
    }
    parse_term(c, sign, out);
    if (c.eof()) break;
    ch = c.peek();
    if (ch != '+' && ch != '-') c.fail("expected '+' or '-'");
  }
  if (out.empty()) throw PhaseParseError("empty Taylor support", 0);
  return out;
}

std::string print_phase(const PolynomialPhase& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    Rational a = c;
    if (a < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    auto [j, k] = e;
    bool unit = (a == 1) && (j + k > 0);
    if (!unit) os << rat_str(a);
    if (j > 0) {
      if (!unit) os << "*";
      os << "x";
      if (j > 1) os << "^" << j;
    }
    if (k > 0) {
      if (!unit || j > 0) os << "*";
      os << "y";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

PolynomialPhase derivative(const PolynomialPhase& f, int var) {
  if (var != 0 && var != 1) throw std::invalid_argument("var must be 0 or 1");
  PolynomialPhase d;
  for (const auto& [e, c] : f.terms()) {
    if (var == 0 && e.first > 0) d.add_term(e.first - 1, e.second, c * e.first);
    if (var == 1 && e.second > 0) d.add_term(e.first, e.second - 1, c * e.second);
  }
  return d;
}

PolynomialPhase angular_derivative(const PolynomialPhase& f) {
  PolynomialPhase t;
  for (const auto& [e, c] : f.terms()) {
    if (e.second > 0) t.add_term(e.first + 1, e.second - 1, c * e.second);
    if (e.first > 0) t.add_term(e.first - 1, e.second + 1, -c * e.first);
  }
  return t;
}

double eval_phase(const PolynomialPhase& f, double x1, double x2) {
  // Horner in x1 over inner Horner polynomials in x2, ascending exponents.
  // Deterministic summation order.
  double total = 0.0;
  auto it = f.terms().begin();
  std::vector<std::pair<int, double>> by_j;  // (j, value of inner poly at x2)
  while (it != f.terms().end()) {
    int j = it->first.first;
    // Collect terms with this j; they are consecutive and k-ascending.
    std::vector<std::pair<int, double>> ks;
    while (it != f.terms().end() && it->first.first == j) {
      ks.emplace_back(it->first.second, to_double(it->second));
      ++it;
    }
    double inner = 0.0;
    int prev_k = -1;
    for (auto rit = ks.rbegin(); rit != ks.rend(); ++rit) {
      if (prev_k < 0) {
        inner = rit->second;
      } else {
        for (int d = 0; d < prev_k - rit->first; ++d) inner *= x2;
        inner += rit->second;
      }
      prev_k = rit->first;
    }
    for (int d = 0; d < prev_k; ++d) inner *= x2;
    by_j.emplace_back(j, inner);
  }
  int prev_j = -1;
  for (auto rit = by_j.rbegin(); rit != by_j.rend(); ++rit) {
    if (prev_j < 0) {
      total = rit->second;
    } else {
      for (int d = 0; d < prev_j - rit->first; ++d) total *= x1;
      total += rit->second;
    }
    prev_j = rit->first;
  }
  for (int d = 0; d < prev_j; ++d) total *= x1;
  return total;
}

// --- compiled form ---------------------------------------------------------

CompiledPhase::CompiledPhase(const PolynomialPhase& f) {
  for (const auto& [e, c] : f.terms()) {
    terms.push_back({e.first, e.second, to_double(c)});
    max_j = std::max(max_j, e.first);
    max_k = std::max(max_k, e.second);
  }
}

double CompiledPhase::eval(double x, double y) const {
  double px[65], py[65];
  px[0] = py[0] = 1.0;
  for (int i = 1; i <= max_j; ++i) px[i] = px[i - 1] * x;
  for (int i = 1; i <= max_k; ++i) py[i] = py[i - 1] * y;
  double s = 0.0;
  for (const auto& t : terms) s += t.c * px[t.j] * py[t.k];
  return s;
}

double CompiledPhase::grad1_bound(double ax, double ay) const {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.j > 0) s += std::abs(t.c) * t.j * std::pow(ax, t.j - 1) * std::pow(ay, t.k);
  return s;
}

double CompiledPhase::grad2_bound(double ax, double ay) const {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.k > 0) s += std::abs(t.c) * t.k * std::pow(ax, t.j) * std::pow(ay, t.k - 1);
  return s;
}

double CompiledPhase::abs_bound(double ax, double ay) const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.c) * std::pow(ax, t.j) * std::pow(ay, t.k);
  return s;
}

// --- amplitudes ------------------------------------------------------------

Amplitude Amplitude::bump_of(double sigma) {
  if (sigma <= 0) throw std::invalid_argument("bump sigma must be positive");
  Amplitude a;
  a.kind = AmplitudeKind::bump;
  a.sigma = sigma;
  return a;
}

Amplitude Amplitude::indicator_of(double radius) {
  if (radius <= 0) throw std::invalid_argument("indicator radius must be positive");
  Amplitude a;
  a.kind = AmplitudeKind::indicator;
  a.radius = radius;
  return a;
}

Amplitude Amplitude::polynomial_of(PolynomialPhase p) {
  Amplitude a;
  a.kind = AmplitudeKind::polynomial;
  a.poly = std::move(p);
  return a;
}

double eval_amplitude(const Amplitude& a, double x1, double x2) {
  switch (a.kind) {
    case AmplitudeKind::bump: {
      double r = std::hypot(x1, x2);
      if (r <= a.sigma) return 1.0;
      if (r >= 2.0 * a.sigma) return 0.0;
      // exp(-1/t) glue on the shell sigma < r < 2*sigma
      double s = (r - a.sigma) / a.sigma;  // in (0,1)
      double g1 = std::exp(-1.0 / (1.0 - s));
      double g0 = std::exp(-1.0 / s);
      return g1 / (g1 + g0);
    }
    case AmplitudeKind::indicator:
      return (x1 * x1 + x2 * x2 <= a.radius * a.radius) ? 1.0 : 0.0;
    case AmplitudeKind::polynomial:
      return eval_phase(a.poly, x1, x2);
  }
  return 0.0;
}

double Amplitude::sup_norm(double rho) const {
  switch (kind) {
    case AmplitudeKind::bump:
    case AmplitudeKind::indicator:
      return 1.0;
    case AmplitudeKind::polynomial: {
      const int n = 1024;
      double m = 0.0;
      CompiledPhase cp(poly);
      for (int i = 0; i < n; ++i) {
        double x = -rho + (2.0 * rho) * (i + 0.5) / n;
        for (int l = 0; l < n; ++l) {
          double y = -rho + (2.0 * rho) * (l + 0.5) / n;
          m = std::max(m, std::abs(cp.eval(x, y)));
        }
      }
      return m * 1.05;
    }
  }
  return 0.0;
}

double Amplitude::support_radius(double rho) const {
  switch (kind) {
    case AmplitudeKind::bump:
      return 2.0 * sigma;
    case AmplitudeKind::indicator:
      return radius;
    case AmplitudeKind::polynomial:
      return rho * std::sqrt(2.0);
  }
  return rho;
}

}  // namespace oscml
