// Newton polyhedron invariants of a polynomial phase, in exact arithmetic:
// hull vertices, compact faces, distance d, principal face/part, root order
// nu on the unit circle, multiplicity m, height in the given coordinates.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscml/phase.hpp"
#include "oscml/rational.hpp"

namespace oscml {

struct Face {
  bool is_vertex = true;
  Exponent a{0, 0};
  Exponent b{0, 0};  // edge endpoints when !is_vertex (a.j < b.j)

  std::string str() const;
};

struct UnboundedPrincipalFace : std::runtime_error {
  UnboundedPrincipalFace() : std::runtime_error("unbounded principal face") {}
};
struct NotNormalized : std::runtime_error {
  NotNormalized() : std::runtime_error("phase not normalized: term with j+k <= 1") {}
};

struct NewtonInvariants {
  std::vector<Exponent> hull_vertices;  // extreme points, j ascending
  std::vector<Face> compact_faces;      // vertices then edges
  Rational distance_d;
  bool principal_unbounded = false;
  Face principal_face;  // valid when !principal_unbounded
  PolynomialPhase principal_part;
  std::optional<int> nu;              // absent when principal face unbounded
  std::optional<int> multiplicity_m;  // absent when principal face unbounded
  Rational height_in_coords;          // == distance_d
  bool adapted_declared = false;
  bool m_provisional = false;  // set when !adapted_declared
};

// Extreme points of conv(union (j,k)+R_+^2) over the support, j ascending.
std::vector<Exponent> newton_polyhedron(const std::vector<Exponent>& support);

// All compact faces: hull vertices plus edges between consecutive vertices.
std::vector<Face> newton_diagram(const std::vector<Exponent>& hull_vertices);

// Coordinate d of the bisectrix/boundary intersection (exact).
Rational newton_distance(const std::vector<Exponent>& hull_vertices);

// Minimal-dimension face containing (d,d); throws UnboundedPrincipalFace when
// (d,d) lies in the interior of a horizontal/vertical ray.
Face principal_face(const std::vector<Exponent>& hull_vertices, const Rational& d);

PolynomialPhase principal_part(const PolynomialPhase& f, const Face& face);

// Maximal order of zeros of the (weighted homogeneous) principal part on the
// unit circle, via axis orders plus real-root multiplicities of f_pi(+-1, t).
int root_order_on_circle(const PolynomialPhase& f_pi);

// m = 1 iff nu == d exactly.
int newton_multiplicity(int nu, const Rational& d);

NewtonInvariants analyze(const PolynomialPhase& f, bool adapted_declared);

}  // namespace oscml
