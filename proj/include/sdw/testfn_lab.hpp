#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdw/params.hpp"
#include "sdw/spectral_core.hpp"

namespace sdw {

/// x -> <x>^{-r}, <x> = sqrt(1 + |x|^2).
struct BracketWeight {
  double r = 1.0;

  explicit BracketWeight(double exponent);
  double operator()(std::span<const double> x) const;
  double radial(double abs_x) const;
};

/// phi = 1 on [0, 1/2], 0 on [1, inf), a polynomial step of vanishing order k at both
/// junctions in between. k >= max(3, 2 kappa') keeps the quotient bound finite.
class TemporalCutoff {
 public:
  double kappa() const { return kappa_; }
  int order() const { return order_; }
  /// max over the sample set of phi^{-kappa'/kappa} (|phi'|^{kappa'} + |phi''|^{kappa'}) on (1/2, 1).
  double bound() const { return bound_; }

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double quotient(double t) const;

 private:
  friend TemporalCutoff cutoff_build(double kappa, int samples);
  double kappa_ = 2.0;
  int order_ = 3;
  double bound_ = 0.0;
};

/// Rejects kappa <= 1. The bound is the maximum over `samples` equispaced interior points.
TemporalCutoff cutoff_build(double kappa, int samples = 10000);

using SpatialFunction = std::function<double(std::span<const double>)>;

/// 4^s Gamma(n/2 + s) / (pi^{n/2} |Gamma(-s)|).
double fractional_constant(int n, double s);

struct PvResult {
  double value = 0.0;
  double error = 0.0;
};

/// (-Delta)^s phi at x for n in {1, 2} via the singular integral: the ball |z| < 1
/// with the symmetrized second difference, the outside through a smooth radial
/// window widened until successive results agree (with Aitken acceleration for
/// algebraic tails). Throws NumericalFailure with the achieved error.
PvResult pv_fractional_laplacian(const SpatialFunction& phi, std::span<const double> x, double s, int n,
                                 double tol = 1e-8);

enum class LemmaBound { Matching, WithoutLog };

struct Lemma21Report {
  std::string branch;  ///< "r<n", "r=n" or "r>n"
  std::vector<double> radii;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double last_decade_slope = 0.0;  ///< slope of log(ratio) vs log<x> over [radius_max/10, radius_max]
  bool pass = false;               ///< finite ratios and slope <= 0.1 (the bound does not lose)
};

/// Ratio of |(-Delta)^s <x>^{-r}| to the decay bound on log-spaced radii (along
/// the first axis). WithoutLog drops the logarithm in the r = n bound.
Lemma21Report lemma21_check(double r, double s, int n, double radius_max, int points = 24,
                            LemmaBound bound = LemmaBound::Matching);

/// max over points of |(-Delta)^s(phi_R)(x) - R^{-2 kappa s} ((-Delta)^s phi)(R^{-kappa} x)| / (|rhs| + 1e-14),
/// phi_R(x) = phi(R^{-kappa} x). Points are given along the first axis.
double lemma22_scaling_check(const SpatialFunction& phi, double R, double kappa, double s, int n,
                             std::span<const double> points);

/// Least-squares slope of log|(-Delta)^s(phi_R)(x)| against log R.
double lemma22_scaling_exponent(const SpatialFunction& phi, std::span<const double> Rs, double kappa, double s,
                                int n, double x);

/// Physical-space solution snapshots on one grid.
struct Snapshots {
  std::vector<double> times;
  std::vector<RealField> u;
  std::vector<RealField> v;
};

struct FunctionalValues {
  double I = 0.0;     ///< int_0^{R^alpha} int |v|^p eta_R
  double J = 0.0;     ///< int_0^{R^alpha} int |u|^q eta_R
  double I_t = 0.0;   ///< same over [R^alpha/2, R^alpha]
  double J_t = 0.0;
  bool coverage_warning = false;  ///< psi_R at the box edge above 1e-3 psi_R(0)
};

/// eta_R(t,x) = phi(R^{-alpha} t) <R^{-beta} x>^{-n-2 delta0}, delta0 = min(delta1, delta2),
/// with phi the cutoff for kappa = min(p, q). Rejects snapshots ending before R^alpha.
FunctionalValues functionals(const Snapshots& snaps, const SystemParams& params, double R, double alpha,
                             double beta);

template <class T>
struct BasicScalings {
  T alpha = T(0);
  T beta = T(0);
  T gamma1 = T(0);
  T gamma2 = T(0);
  bool swapped = false;  ///< computed on the mirrored parameters because delta2 > delta1
  /// -2 alpha <= -2 beta, -alpha - 2 delta1 beta <= -2 beta, -alpha - 2 delta2 beta <= -2 beta.
  std::array<bool, 3> chain{};
  bool chain_holds() const { return chain[0] && chain[1] && chain[2]; }
};

using Scalings = BasicScalings<double>;
using ExactScalings = BasicScalings<Rational>;

template <class T>
BasicScalings<T> blowup_scalings(const BasicParams<T>& params);

struct CriticalConstants {
  double bracket_integral = 0.0;  ///< int <x>^{-n-2 delta0} dx
  double D_p = 0.0;               ///< bracket_integral^{1/p'}
  double D_q = 0.0;               ///< bracket_integral^{1/q'}
  double mass_threshold = 0.0;    ///< equals bracket_integral
};

/// Rejects n outside {1,2,3} and delta0 <= 0 (the bracket integral diverges at delta0 = 0).
CriticalConstants critical_constants(const SystemParams& params, double delta0);

}  // namespace sdw
