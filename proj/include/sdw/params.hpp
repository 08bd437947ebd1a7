#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace sdw {

/// Exact rational scalar. Every double converts to it without rounding.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Parses "a", "a/b" or a decimal literal ("0.25") into an exact rational.
Rational parse_rational(const std::string& text);

/// Parameter tuple (n, m, delta1, delta2, p, q) shared by every theorem check.
/// Scalar is double for the floating path and Rational for the exact path.
template <class T>
struct BasicParams {
  int n = 1;
  T m = T(1);
  T delta1 = T(0);
  T delta2 = T(0);
  T p = T(2);
  T q = T(2);

  /// m0 = 2m/(2-m), i.e. 1/m0 = 1/m - 1/2.
  T m0() const { return T(2) * m / (T(2) - m); }

  /// Exchanges the roles of u and v: (delta1, p) <-> (delta2, q).
  BasicParams swapped() const { return BasicParams{n, m, delta2, delta1, q, p}; }
};

using SystemParams = BasicParams<double>;
using ExactParams = BasicParams<Rational>;

ExactParams to_exact(const SystemParams& p);
SystemParams to_double(const ExactParams& p);

/// Throws InvalidInput unless n >= 1, m in [1,2), deltas in [0,1/2], p,q > 1.
void validate(const SystemParams& p);
void validate(const ExactParams& p);

}  // namespace sdw
