#pragma once

#include <functional>

#include "sdw/spectral_core.hpp"

namespace sdw {

/// Which closed form produced a KernelValues entry.
enum class Branch { RealDistinct, ComplexPair, Degenerate, ZeroFrequency };

const char* to_string(Branch b);

struct Roots {
  cplx lambda1;  ///< + branch of the square root
  cplx lambda2;
};

/// Propagator symbols of w_tt + |xi|^{2 delta} w_t + |xi|^2 w = 0 at one (t, |xi|).
struct KernelValues {
  cplx k0;   ///< multiplies w(0)
  cplx k1;   ///< multiplies w_t(0)
  cplx dk0;  ///< d/dt k0
  cplx dk1;  ///< d/dt k1
  Branch branch;
};

/// Relative discriminant threshold below which the double-root formulas are used.
inline constexpr double kDegenerateThreshold = 1e-8;

/// Roots of lambda^2 + |xi|^{2 delta} lambda + |xi|^2. The + root is computed
/// in the cancellation-free form -|xi|^2 / (|xi|^{2 delta}/2 + sqrt(d)).
/// The damping symbol uses 0^0 = 1, so delta = 0 keeps frictional damping at xi = 0.
Roots characteristic_roots(double xi_abs, double delta);

Branch classify(double xi_abs, double delta);

KernelValues kernel_values(double t, double xi_abs, double delta);

/// The double-root formulas evaluated at (t, |xi|) whatever the discriminant;
/// only meaningful close to the discriminant zero.
KernelValues kernel_values_degenerate(double t, double xi_abs, double delta);

/// |xi| at which the two roots collide (|xi|^{4 delta - 2} = 4), or a negative
/// value for delta = 1/2 where the roots are complex for every |xi| > 0.
double discriminant_zero(double delta);

struct LinearState {
  SpectralField w;
  SpectralField wt;
  double t = 0.0;
  double delta = 0.0;
};

/// Exact multiplier evolution of the linear problem from state.t to t_target.
LinearState evolve_linear(const LinearState& state, double t_target);

/// Radial data symbols |xi| -> w0hat, w1hat. An empty function means zero data.
struct RadialData {
  std::function<double(double)> w0;
  std::function<double(double)> w1;
};

/// Surface measure 2 pi^{n/2} / Gamma(n/2) of the unit sphere in R^n.
double sphere_area(int n);

/// ||d_t^j grad^k w(t)||_{L^2} for radial data, computed as
/// (c_n int_0^inf r^{2k} |d_t^j what(t, r)|^2 r^{n-1} dr)^{1/2} without a grid.
/// Integration runs on geometric panels anchored at the decay scale
/// (1+t)^{-1/(2-2 delta)}, split at the discriminant zero, each panel
/// adaptive to rel_tol. Throws NumericalFailure with the achieved error.
double radial_norm(double t, double delta, const RadialData& data, int n, int j, int k,
                   double rel_tol = 1e-8);

}  // namespace sdw
