#include "oscml/newton.hpp"

#include <algorithm>
#include <cstdint>

#include "oscml/unipoly.hpp"

namespace oscml {

std::string Face::str() const {
  auto pt = [](const Exponent& e) {
    return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
  };
  if (is_vertex) return "vertex" + pt(a);
  return "edge[" + pt(a) + "," + pt(b) + "]";
}

std::vector<Exponent> newton_polyhedron(const std::vector<Exponent>& support) {
  if (support.empty()) throw std::invalid_argument("empty Taylor support");
  // Dominance filter: drop p if some q <= p componentwise.
  std::vector<Exponent> pts = support;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Exponent> minimal;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts)
      if (q != p && q.first <= p.first && q.second <= p.second) {
        dominated = true;
        break;
      }
    if (!dominated) minimal.push_back(p);
  }
  // Staircase: j ascending, k strictly descending. Keep the convex chain.
  std::sort(minimal.begin(), minimal.end());
  std::vector<Exponent> hull;
  auto cross = [](const Exponent& a, const Exponent& b, const Exponent& c) {
    std::int64_t abx = b.first - a.first, aby = b.second - a.second;
    std::int64_t bcx = c.first - b.first, bcy = c.second - b.second;
    return abx * bcy - aby * bcx;
  };
  for (const auto& p : minimal) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

std::vector<Face> newton_diagram(const std::vector<Exponent>& hull) {
  std::vector<Face> faces;
  for (const auto& v : hull) faces.push_back(Face{true, v, v});
  for (std::size_t i = 0; i + 1 < hull.size(); ++i)
    faces.push_back(Face{false, hull[i], hull[i + 1]});
  return faces;
}

Rational newton_distance(const std::vector<Exponent>& hull) {
  if (hull.empty()) throw std::invalid_argument("empty hull");
  const Exponent& first = hull.front();  // min j, max k
  const Exponent& last = hull.back();    // max j, min k
  // Whole chain below the bisectrix: it meets the vertical ray above `first`.
  if (first.second <= first.first) return Rational(first.first);
  // Whole chain left of the bisectrix: horizontal ray from `last`.
  if (last.first <= last.second) return Rational(last.second);
  for (const auto& v : hull)
    if (v.first == v.second) return Rational(v.first);
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const Exponent &a = hull[i], &b = hull[i + 1];
    if (a.second >= a.first && b.second <= b.first) {
      // Edge crosses t1 = t2.
      Rational num = Rational(a.second) * b.first - Rational(a.first) * b.second;
      Rational den = Rational(b.first - a.first) + Rational(a.second - b.second);
      return num / den;
    }
  }
  throw std::logic_error("bisectrix intersection not found");
}

Face principal_face(const std::vector<Exponent>& hull, const Rational& d) {
  for (const auto& v : hull)
    if (Rational(v.first) == d && Rational(v.second) == d) return Face{true, v, v};
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const Exponent &a = hull[i], &b = hull[i + 1];
    if (Rational(a.first) < d && d < Rational(b.first) && Rational(b.second) < d &&
        d < Rational(a.second))
      return Face{false, a, b};
  }
  throw UnboundedPrincipalFace();
}

PolynomialPhase principal_part(const PolynomialPhase& f, const Face& face) {
  PolynomialPhase out;
  if (face.is_vertex) {
    auto it = f.terms().find(face.a);
    if (it != f.terms().end()) out.add_term(face.a.first, face.a.second, it->second);
    return out;
  }
  // Terms on the closed segment [a,b]: collinear and within the j-range.
  std::int64_t dx = face.b.first - face.a.first, dy = face.b.second - face.a.second;
  for (const auto& [e, c] : f.terms()) {
    if (e.first < face.a.first || e.first > face.b.first) continue;
    std::int64_t px = e.first - face.a.first, py = e.second - face.a.second;
    if (dx * py - dy * px == 0) out.add_term(e.first, e.second, c);
  }
  return out;
}

int root_order_on_circle(const PolynomialPhase& f_pi) {
  if (f_pi.empty()) throw std::invalid_argument("zero principal part");
  int min_j = INT32_MAX, min_k = INT32_MAX, max_k = 0;
  for (const auto& [e, c] : f_pi.terms()) {
    min_j = std::min(min_j, e.first);
    min_k = std::min(min_k, e.second);
    max_k = std::max(max_k, e.second);
  }
  int nu = std::max(min_j, min_k);  // axis zeros (0,+-1) and (+-1,0)
  if (f_pi.terms().size() > 1) {
    // Off-axis circle zeros correspond to real roots of f_pi(+-1, t).
    for (int s : {+1, -1}) {
      std::vector<Rational> coeffs(max_k + 1, Rational(0));
      for (const auto& [e, c] : f_pi.terms())
        coeffs[e.second] += (s < 0 && e.first % 2 == 1) ? -c : c;
      RatPoly p{std::move(coeffs)};
      if (!p.is_zero() && p.degree() > 0)
        nu = std::max(nu, max_real_root_multiplicity(p));
    }
  }
  return nu;
}

int newton_multiplicity(int nu, const Rational& d) { return Rational(nu) == d ? 1 : 0; }

NewtonInvariants analyze(const PolynomialPhase& f, bool adapted_declared) {
  if (f.empty()) throw std::invalid_argument("empty Taylor support");
  if (!f.is_normalized()) throw NotNormalized();
  NewtonInvariants inv;
  inv.hull_vertices = newton_polyhedron(f.taylor_support());
  inv.compact_faces = newton_diagram(inv.hull_vertices);
  inv.distance_d = newton_distance(inv.hull_vertices);
  inv.height_in_coords = inv.distance_d;
  inv.adapted_declared = adapted_declared;
  inv.m_provisional = !adapted_declared;
  try {
    inv.principal_face = principal_face(inv.hull_vertices, inv.distance_d);
  } catch (const UnboundedPrincipalFace&) {
    inv.principal_unbounded = true;
    return inv;
  }
  inv.principal_part = principal_part(f, inv.principal_face);
  inv.nu = root_order_on_circle(inv.principal_part);
  inv.multiplicity_m = newton_multiplicity(*inv.nu, inv.distance_d);
  return inv;
}

}  // namespace oscml
