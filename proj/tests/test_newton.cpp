#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oscml/newton.hpp"
#include "oscml/unipoly.hpp"

using namespace oscml;

namespace {

// ---- independent oracles ---------------------------------------------------

// Brute-force extreme points of conv(union (j,k)+R_+^2): enumerate every
// lattice point of the polyhedron inside a 2*max-exponent bounding box, take
// the full convex hull of that point cloud, keep hull vertices within the
// original exponent range.
std::vector<Exponent> hull_oracle(const std::vector<Exponent>& support) {
  int M = 0;
  for (auto& [j, k] : support) M = std::max({M, j, k});
  int B = 2 * M + 2;
  std::vector<Exponent> cloud;
  for (int j = 0; j <= B; ++j)
    for (int k = 0; k <= B; ++k)
      for (auto& [a, b] : support)
        if (a <= j && b <= k) {
          cloud.push_back({j, k});
          break;
        }
  // Monotone chain on the cloud.
  std::sort(cloud.begin(), cloud.end());
  auto cross = [](Exponent O, Exponent A, Exponent B2) {
    return (long long)(A.first - O.first) * (B2.second - O.second) -
           (long long)(A.second - O.second) * (B2.first - O.first);
  };
  std::vector<Exponent> hull;
  for (auto& p : cloud) {  // lower hull
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  std::size_t lower = hull.size() + 1;
  for (auto it = cloud.rbegin(); it != cloud.rend(); ++it) {  // upper hull
    while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) <= 0)
      hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  // True extreme points of the unbounded polyhedron are support points, hence
  // within [0,M]^2; box-boundary vertices are truncation artifacts.
  std::vector<Exponent> out;
  for (auto& v : hull)
    if (v.first <= M && v.second <= M) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

// Exact bisectrix distance by a tiny LP over support-point pairs: the optimum
// of min t s.t. (t,t) dominates a convex combination is attained on at most
// two support points.
Rational distance_oracle(const std::vector<Exponent>& support) {
  auto single = [](const Exponent& p) {
    return Rational(std::max(p.first, p.second));
  };
  Rational best = single(support[0]);
  for (auto& p : support) best = std::min(best, single(p));
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t l = i + 1; l < support.size(); ++l) {
      const auto &p = support[i], &q = support[l];
      std::vector<Rational> lams{0, 1};
      Rational den = Rational(p.first - q.first) - Rational(p.second - q.second);
      if (den != 0) {
        Rational lam = Rational(q.second - q.first) / den;
        if (lam > 0 && lam < 1) lams.push_back(lam);
      }
      for (const Rational& lam : lams) {
        Rational t1 = lam * p.first + (1 - lam) * q.first;
        Rational t2 = lam * p.second + (1 - lam) * q.second;
        best = std::min(best, std::max(t1, t2));
      }
    }
  return best;
}

std::vector<Exponent> transpose(const std::vector<Exponent>& s) {
  std::vector<Exponent> t;
  for (auto& [j, k] : s) t.push_back({k, j});
  return t;
}

}  // namespace

// ---- unipoly --------------------------------------------------------------

TEST_CASE("squarefree decomposition of (t-1)^2 (t+2)") {
  // t^3 - 3t + 2
  RatPoly p({Rational(2), Rational(-3), Rational(0), Rational(1)});
  auto fac = squarefree_decompose(p);
  REQUIRE(fac.size() == 2);
  int got1 = 0, got2 = 0;
  for (auto& f : fac) {
    if (f.multiplicity == 1) {
      CHECK(f.poly.degree() == 1);
      ++got1;
    }
    if (f.multiplicity == 2) {
      CHECK(f.poly.degree() == 1);
      ++got2;
    }
  }
  CHECK(got1 == 1);
  CHECK(got2 == 1);
  CHECK(max_real_root_multiplicity(p) == 2);
}

TEST_CASE("sturm count") {
  // t^2 + 1: no real roots
  CHECK(count_real_roots(RatPoly({Rational(1), Rational(0), Rational(1)})) == 0);
  // t^2 - 1: two
  CHECK(count_real_roots(RatPoly({Rational(-1), Rational(0), Rational(1)})) == 2);
  // t^3: one distinct
  CHECK(count_real_roots(RatPoly({Rational(0), Rational(0), Rational(0), Rational(1)})) == 1);
  CHECK(max_real_root_multiplicity(
            RatPoly({Rational(0), Rational(0), Rational(0), Rational(1)})) == 3);
  // (t^2+1)^2 has no real roots at all
  CHECK(max_real_root_multiplicity(
            RatPoly({Rational(1), Rational(0), Rational(2), Rational(0), Rational(1)})) == 0);
}

// ---- hull / distance ------------------------------------------------------

TEST_CASE("polyhedron fixtures") {
  CHECK(newton_polyhedron({{2, 2}}) == std::vector<Exponent>{{2, 2}});
  CHECK(newton_polyhedron({{3, 0}, {0, 3}}) == std::vector<Exponent>{{0, 3}, {3, 0}});
  CHECK(newton_polyhedron({{5, 0}, {2, 2}, {0, 5}}) ==
        std::vector<Exponent>{{0, 5}, {2, 2}, {5, 0}});
  // dominated point drops out
  CHECK(newton_polyhedron({{2, 0}, {3, 1}}) == std::vector<Exponent>{{2, 0}});
  // collinear midpoint is not extreme
  CHECK(newton_polyhedron({{0, 4}, {2, 2}, {4, 0}}) == std::vector<Exponent>{{0, 4}, {4, 0}});
}

TEST_CASE("hull equals brute-force oracle on random supports") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> E(0, 9), N(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::set<Exponent> sup;
    int n = N(rng);
    for (int i = 0; i < n; ++i) sup.insert({E(rng), E(rng)});
    std::vector<Exponent> support(sup.begin(), sup.end());
    CAPTURE(trial);
    CHECK(newton_polyhedron(support) == hull_oracle(support));
  }
}

TEST_CASE("distance fixtures") {
  CHECK(newton_distance(newton_polyhedron({{2, 0}, {0, 2}})) == Rational(1));
  CHECK(newton_distance(newton_polyhedron({{3, 0}, {0, 3}})) == Rational(3, 2));
  CHECK(newton_distance(newton_polyhedron({{2, 2}})) == Rational(2));
}

TEST_CASE("distance equals pair-LP oracle; transpose invariance; monotonicity") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> E(0, 9), N(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::set<Exponent> sup;
    int n = N(rng);
    for (int i = 0; i < n; ++i) sup.insert({E(rng), E(rng)});
    std::vector<Exponent> support(sup.begin(), sup.end());
    Rational d = newton_distance(newton_polyhedron(support));
    CAPTURE(trial);
    CHECK(d == distance_oracle(support));
    CHECK(d == newton_distance(newton_polyhedron(transpose(support))));
    // adding a point never increases d
    std::vector<Exponent> more = support;
    more.push_back({E(rng), E(rng)});
    CHECK(newton_distance(newton_polyhedron(more)) <= d);
  }
}

TEST_CASE("principal face fixtures") {
  {
    auto hull = newton_polyhedron({{2, 2}});
    auto face = principal_face(hull, newton_distance(hull));
    CHECK(face.is_vertex);
    CHECK(face.a == Exponent{2, 2});
  }
  {
    auto hull = newton_polyhedron({{3, 0}, {0, 3}});
    auto face = principal_face(hull, newton_distance(hull));
    CHECK_FALSE(face.is_vertex);
    CHECK(face.a == Exponent{0, 3});
    CHECK(face.b == Exponent{3, 0});
  }
  {
    auto hull = newton_polyhedron({{2, 2}, {5, 0}});
    auto face = principal_face(hull, newton_distance(hull));
    CHECK(face.is_vertex);
    CHECK(face.a == Exponent{2, 2});
  }
  {
    // x^2 alone: (d,d) = (2,2) sits on the vertical ray
    auto hull = newton_polyhedron({{2, 0}});
    CHECK_THROWS_AS(principal_face(hull, newton_distance(hull)), UnboundedPrincipalFace);
  }
}

TEST_CASE("principal part") {
  auto f = parse_phase("x^3 + y^3 + x^2*y^2");
  auto inv = analyze(f, true);
  CHECK(inv.principal_part == parse_phase("x^3 + y^3"));

  auto g = parse_phase("x^2 - y^2 + x^4");
  auto ginv = analyze(g, true);
  CHECK(ginv.principal_part == parse_phase("x^2 - y^2"));
}

TEST_CASE("root order on circle") {
  CHECK(root_order_on_circle(parse_phase("x^2*y^2")) == 2);
  CHECK(root_order_on_circle(parse_phase("x^2+y^2")) == 0);
  CHECK(root_order_on_circle(parse_phase("x^2-y^2")) == 1);
  // (y - x)^2 restricted to an edge: double circle root off the axes
  CHECK(root_order_on_circle(parse_phase("x^2 - 2*x*y + y^2")) == 2);
}

TEST_CASE("analyze fixtures") {
  auto a = analyze(parse_phase("x^2*y^2"), true);
  CHECK(a.distance_d == Rational(2));
  CHECK(*a.nu == 2);
  CHECK(*a.multiplicity_m == 1);
  CHECK(a.height_in_coords == Rational(2));
  CHECK_FALSE(a.m_provisional);

  auto b = analyze(parse_phase("x^3+y^3"), true);
  CHECK(b.distance_d == Rational(3, 2));
  CHECK(*b.nu == 1);
  CHECK(*b.multiplicity_m == 0);

  auto c = analyze(parse_phase("x^2+y^2"), true);
  CHECK(c.distance_d == Rational(1));
  CHECK(*c.nu == 0);
  CHECK(*c.multiplicity_m == 0);

  auto d = analyze(parse_phase("x^2+y^2"), false);
  CHECK(d.m_provisional);
}

TEST_CASE("analyze rejects non-normalized phases and flags unbounded faces") {
  CHECK_THROWS_AS(analyze(parse_phase("x"), true), NotNormalized);
  auto inv = analyze(parse_phase("x^2"), true);
  CHECK(inv.principal_unbounded);
  CHECK_FALSE(inv.nu.has_value());
  CHECK_FALSE(inv.multiplicity_m.has_value());
}

TEST_CASE("edge inequalities: (d,d) tight only on the principal face") {
  // x^5 + x^2 y^2 + y^5: two edges; principal face is the vertex (2,2)=(d,d)
  auto hull = newton_polyhedron({{5, 0}, {2, 2}, {0, 5}});
  Rational d = newton_distance(hull);
  CHECK(d == Rational(2));
  auto face = principal_face(hull, d);
  CHECK(face.is_vertex);
  auto faces = newton_diagram(hull);
  CHECK(faces.size() == 5);  // 3 vertices + 2 edges
}

TEST_CASE("nu of simple circle roots is max(axis orders, 1)") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> C(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    // a x^2 + b y^2 with a>0, b<0: saddle edge with simple roots
    PolynomialPhase f;
    f.add_term(2, 0, C(rng));
    f.add_term(0, 2, -C(rng));
    CHECK(root_order_on_circle(f) == 1);
  }
}
