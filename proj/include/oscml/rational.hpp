// Exact rational scalar used throughout the phase/Newton layer.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace oscml {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

// Canonical "p" or "p/q" form.
inline std::string rat_str(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace oscml
