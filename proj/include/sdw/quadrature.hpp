#pragma once

#include <functional>

namespace sdw::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  ///< Kronrod-minus-Gauss estimate summed over panels
  double l1 = 0.0;     ///< integral of |f|, the scale the relative test uses
};

/// Globally adaptive 31-point Gauss-Kronrod on a finite [a, b].
/// Throws NumericalFailure carrying the achieved error when the estimate
/// stays above max(abs_tol, rel_tol * l1).
Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol = 0.0, unsigned max_depth = 24);

/// Same as integrate() but never throws; callers inspect the error.
Result integrate_nothrow(const std::function<double(double)>& f, double a, double b, double rel_tol,
                         unsigned max_depth = 24);

/// Tanh-sinh on a finite [a, b]; suited to algebraic endpoint singularities.
Result integrate_endpoint_nothrow(const std::function<double(double)>& f, double a, double b, double rel_tol);

}  // namespace sdw::quad
