#include "sdw/testfn_lab.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdw/errors.hpp"
#include "sdw/linear_kernels.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

namespace {

using std::numbers::pi;

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

BracketWeight::BracketWeight(double exponent) : r(exponent) {
  if (!(exponent > 0.0)) throw InvalidInput("bracket weight exponent must be positive");
}

double BracketWeight::radial(double abs_x) const { return std::pow(1.0 + abs_x * abs_x, -0.5 * r); }

double BracketWeight::operator()(std::span<const double> x) const {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::pow(1.0 + r2, -0.5 * r);
}

// ---------------------------------------------------------------- cutoff

double TemporalCutoff::value(double t) const {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  return boost::math::ibetac(order_, order_, 2.0 * t - 1.0);
}

double TemporalCutoff::d1(double t) const {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  return -2.0 * boost::math::ibeta_derivative(order_, order_, 2.0 * t - 1.0);
}

double TemporalCutoff::d2(double t) const {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  const double u = 2.0 * t - 1.0;
  const int k = order_;
  const double b = boost::math::beta(k, k);
  return -4.0 * (k - 1) * std::pow(u * (1.0 - u), k - 2) * (1.0 - 2.0 * u) / b;
}

double TemporalCutoff::quotient(double t) const {
  const double phi = value(t);
  if (!(phi > 0.0)) return 0.0;
  const double kp = kappa_ / (kappa_ - 1.0);
  const double lphi = -std::log(phi) / (kappa_ - 1.0);
  auto term = [&](double d) { return d == 0.0 ? 0.0 : std::exp(lphi + kp * std::log(std::abs(d))); };
  return term(d1(t)) + term(d2(t));
}

TemporalCutoff cutoff_build(double kappa, int samples) {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw InvalidInput("cutoff_build: kappa must exceed 1");
  if (samples < 10) throw InvalidInput("cutoff_build: need at least 10 samples");
  TemporalCutoff c;
  c.kappa_ = kappa;
  const double kp = kappa / (kappa - 1.0);
  c.order_ = std::max(3, static_cast<int>(std::ceil(2.0 * kp - 1e-12)));
  if (c.order_ > 60) throw InvalidInput("cutoff_build: kappa too close to 1 for a double-precision cutoff");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = 0.5 + 0.5 * (i + 0.5) / samples;
    worst = std::max(worst, c.quotient(t));
  }
  c.bound_ = worst;
  return c;
}

// ---------------------------------------------------------------- fractional Laplacian

double fractional_constant(int n, double s) {
  return std::pow(4.0, s) * std::tgamma(0.5 * n + s) / (std::pow(pi, 0.5 * n) * std::abs(std::tgamma(-s)));
}

namespace {

struct PvKernel {
  const SpatialFunction& phi;
  std::array<double, 2> x{};
  int n;
  double s;
  double tol;

  double at(double a, double b) const {
    std::array<double, 2> y{a, b};
    return phi(std::span<const double>(y.data(), n));
  }

  // Second difference 2 phi(x) - phi(x+z) - phi(x-z), averaged over directions for n = 2.
  double sym_difference(double rho, double phix) const {
    if (n == 1) return 2.0 * phix - at(x[0] + rho, 0) - at(x[0] - rho, 0);
    auto f = [&](double th) {
      const double c = std::cos(th), sn = std::sin(th);
      return 2.0 * phix - at(x[0] + rho * c, x[1] + rho * sn) - at(x[0] - rho * c, x[1] - rho * sn);
    };
    return quad::integrate(f, 0.0, pi, 0.1 * tol, 1e-15).value;
  }

  // phi(x+z) + phi(x-z) for n = 1, the circle integral of phi(x + rho e) for n = 2.
  double shell(double rho) const {
    if (n == 1) return at(x[0] + rho, 0) + at(x[0] - rho, 0);
    auto f = [&](double th) { return at(x[0] + rho * std::cos(th), x[1] + rho * std::sin(th)); };
    return quad::integrate(f, 0.0, 2.0 * pi, 0.1 * tol, 1e-15).value;
  }
};

double window(double y) {
  if (y <= 1.0) return 1.0;
  if (y >= 2.0) return 0.0;
  return boost::math::ibetac(4, 4, y - 1.0);
}

}  // namespace

PvResult pv_fractional_laplacian(const SpatialFunction& phi, std::span<const double> x, double s, int n, double tol) {
  if (n != 1 && n != 2) throw InvalidInput("pv_fractional_laplacian: n must be 1 or 2");
  if (x.size() != static_cast<std::size_t>(n)) throw InvalidInput("pv_fractional_laplacian: point dimension differs from n");
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("pv_fractional_laplacian: s must lie in (0,1)");
  if (!(tol > 0.0)) throw InvalidInput("pv_fractional_laplacian: tol must be positive");

  PvKernel k{phi, {x[0], n == 2 ? x[1] : 0.0}, n, s, tol};
  const double phix = k.at(k.x[0], k.x[1]);
  const double sphere_half = n == 1 ? 1.0 : pi;  // measure of the half sphere of directions

  // Below rho_c the second difference drowns in rounding; it is quadratic there,
  // so that piece is integrated from its value at rho_c.
  const double rho_c = std::min(0.25, 1e-3 * std::max(1.0, std::hypot(k.x[0], k.x[1])));
  const double curvature = k.sym_difference(rho_c, phix) / (rho_c * rho_c);
  const double core = curvature * std::pow(rho_c, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);

  // rho_c < |z| < 1 with z = w^gamma, which keeps the integrand bounded.
  const double gamma = 1.0 / (1.0 - s);
  auto inner_f = [&](double w) {
    const double rho = std::pow(w, gamma);
    return k.sym_difference(rho, phix) * gamma * std::pow(w, -1.0 - 2.0 * s * gamma);
  };
  quad::Result inner = quad::integrate(inner_f, std::pow(rho_c, 1.0 - s), 1.0, tol, 1e-15);
  inner.value += core;

  // |z| >= 1: 2 phi(x) / (2s) per unit half-sphere analytically, minus the shell integral.
  const double constant_part = sphere_half * phix / s;
  auto shell_f = [&](double z) { return k.shell(z) * std::pow(z, -1.0 - 2.0 * s); };

  double xnorm = std::hypot(k.x[0], k.x[1]);
  double Z = std::max(32.0, 4.0 * xnorm);
  const double z_max = std::max(1.0e5, 64.0 * xnorm);

  // Cumulative unwindowed integral over [1, Z]; panels double up to length 8.
  double plain = 0.0;
  double plain_err = 0.0;
  double reached = 1.0;
  auto extend_to = [&](double target) {
    while (reached < target) {
      const double len = std::min({reached, 8.0, target - reached});
      const auto r = quad::integrate(shell_f, reached, reached + len, 0.1 * tol, 1e-16);
      plain += r.value;
      plain_err += r.error;
      reached += len;
    }
  };
  auto windowed_tail = [&](double z) {
    double acc = 0.0, err = 0.0;
    for (double a = z; a < 2.0 * z;) {
      const double len = std::min(8.0, 2.0 * z - a);
      const auto r = quad::integrate([&](double y) { return shell_f(y) * window(y / z); }, a, a + len, 0.1 * tol,
                                     1e-16);
      acc += r.value;
      err += r.error;
      a += len;
    }
    return std::pair{acc, err};
  };

  const double cst = fractional_constant(n, s);

  // Non-oscillating tails: u = z^{-2s} maps [Z, inf) onto (0, Z^{-2s}] with a
  // bounded integrand, so tanh-sinh handles constants and algebraic decay.
  extend_to(Z);
  try {
    auto mapped = [&](double u) {
      const double z = std::min(std::pow(u, -0.5 / s), 1e300);
      return k.shell(z) / (2.0 * s);
    };
    const quad::Result tail = quad::integrate_endpoint_nothrow(mapped, 0.0, std::pow(Z, -2.0 * s), 0.1 * tol);
    const double value = cst * (inner.value + constant_part - plain - tail.value);
    const double error = cst * (inner.error + plain_err + tail.error);
    const double target = tol * std::max(std::abs(value), 1e-3 * cst * std::abs(constant_part)) + 1e-14 * cst;
    if (std::isfinite(value) && error <= target) return PvResult{value, error};
  } catch (const NumericalFailure&) {
    // Oscillating shells: fall through to the windowed sequence.
  }

  std::vector<double> seq;
  double best = 0.0;
  double best_err = HUGE_VAL;
  for (; Z <= z_max; Z *= 2.0) {
    extend_to(Z);
    const auto [tail, tail_err] = windowed_tail(Z);
    seq.push_back(plain + tail);
    const double total = inner.value + constant_part - seq.back();
    const double target = tol * std::max(std::abs(total), 1e-3 * std::abs(constant_part)) + 1e-14;
    const std::size_t m = seq.size();
    if (m >= 2) {
      const double d1 = seq[m - 1] - seq[m - 2];
      if (std::abs(d1) < best_err) {
        best_err = std::abs(d1);
        best = seq[m - 1];
      }
      if (m >= 3) {
        const double d0 = seq[m - 2] - seq[m - 3];
        if (d1 != d0 && std::abs(d1) < std::abs(d0)) {
          const double ait = seq[m - 1] - d1 * d1 / (d1 - d0);
          const double ait_err = std::abs(ait - seq[m - 1]) * std::abs(d1 / d0);
          if (ait_err < best_err) {
            best_err = ait_err;
            best = ait;
          }
        }
      }
      if (best_err + plain_err + tail_err <= target) break;
    }
  }
  const double value = cst * (inner.value + constant_part - best);
  const double error = cst * (inner.error + plain_err + best_err);
  const double target = tol * std::max(std::abs(value), 1e-3 * cst * std::abs(constant_part)) + 1e-14 * cst;
  if (!(error <= target)) {
    std::ostringstream msg;
    msg << "pv_fractional_laplacian: tail did not converge, achieved error " << error;
    throw NumericalFailure(msg.str(), error);
  }
  return PvResult{value, error};
}

// ---------------------------------------------------------------- lemma checks

Lemma21Report lemma21_check(double r, double s, int n, double radius_max, int points, LemmaBound bound) {
  if (!(r > 0.0)) throw InvalidInput("lemma21_check: r must be positive");
  if (!(radius_max > 1.0)) throw InvalidInput("lemma21_check: radius_max must exceed 1");
  if (points < 8) throw InvalidInput("lemma21_check: need at least 8 radii");
  Lemma21Report rep;
  const double dn = n;
  rep.branch = r < dn ? "r<n" : (r == dn ? "r=n" : "r>n");
  const BracketWeight psi(r);
  SpatialFunction f = [&](std::span<const double> y) { return psi(y); };

  auto decay = [&](double a) {
    const double br = std::sqrt(1.0 + a * a);
    if (r < dn) return std::pow(br, -r - 2.0 * s);
    const double base = std::pow(br, -dn - 2.0 * s);
    if (r == dn && bound == LemmaBound::Matching) return base * std::log(std::numbers::e + a);
    return base;
  };

  rep.radii.push_back(0.0);
  for (int i = 0; i < points; ++i)
    rep.radii.push_back(std::pow(10.0, -1.0 + (std::log10(radius_max) + 1.0) * i / (points - 1)));

  std::vector<double> lx, ly;
  bool finite = true;
  for (double a : rep.radii) {
    std::array<double, 2> pt{a, 0.0};
    const double val = pv_fractional_laplacian(f, std::span<const double>(pt.data(), n), s, n).value;
    const double ratio = std::abs(val) / decay(a);
    rep.ratios.push_back(ratio);
    if (!std::isfinite(ratio)) finite = false;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (a >= radius_max / 10.0 * (1 - 1e-12)) {
      lx.push_back(0.5 * std::log1p(a * a));
      ly.push_back(std::log(ratio));
    }
  }
  rep.last_decade_slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : 0.0;
  rep.pass = finite && rep.last_decade_slope <= 0.1;
  return rep;
}

double lemma22_scaling_check(const SpatialFunction& phi, double R, double kappa, double s, int n,
                             std::span<const double> points) {
  if (!(R > 0.0) || !(kappa > 0.0)) throw InvalidInput("lemma22_scaling_check: R and kappa must be positive");
  const double shrink = std::pow(R, -kappa);
  SpatialFunction phi_r = [&](std::span<const double> y) {
    std::array<double, 2> z{};
    for (std::size_t d = 0; d < y.size(); ++d) z[d] = shrink * y[d];
    return phi(std::span<const double>(z.data(), y.size()));
  };
  double worst = 0.0;
  for (double p : points) {
    std::array<double, 2> pt{p, 0.0};
    std::array<double, 2> scaled{shrink * p, 0.0};
    const double lhs = pv_fractional_laplacian(phi_r, std::span<const double>(pt.data(), n), s, n).value;
    const double rhs =
        std::pow(R, -2.0 * kappa * s) * pv_fractional_laplacian(phi, std::span<const double>(scaled.data(), n), s, n).value;
    worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-14));
  }
  return worst;
}

double lemma22_scaling_exponent(const SpatialFunction& phi, std::span<const double> Rs, double kappa, double s, int n,
                                double x) {
  if (Rs.size() < 2) throw InvalidInput("lemma22_scaling_exponent: need at least two R values");
  std::vector<double> lx, ly;
  for (double R : Rs) {
    const double shrink = std::pow(R, -kappa);
    SpatialFunction phi_r = [&](std::span<const double> y) {
      std::array<double, 2> z{};
      for (std::size_t d = 0; d < y.size(); ++d) z[d] = shrink * y[d];
      return phi(std::span<const double>(z.data(), y.size()));
    };
    std::array<double, 2> pt{x, 0.0};
    const double v = pv_fractional_laplacian(phi_r, std::span<const double>(pt.data(), n), s, n).value;
    lx.push_back(std::log(R));
    ly.push_back(std::log(std::abs(v)));
  }
  return least_squares_slope(lx, ly);
}

// ---------------------------------------------------------------- functionals

FunctionalValues functionals(const Snapshots& snaps, const SystemParams& params, double R, double alpha, double beta) {
  validate(params);
  if (!(R > 0.0)) throw InvalidInput("functionals: R must be positive");
  if (snaps.times.empty() || snaps.u.size() != snaps.times.size() || snaps.v.size() != snaps.times.size())
    throw InvalidInput("functionals: snapshot arrays are empty or of different lengths");
  for (std::size_t i = 1; i < snaps.times.size(); ++i)
    if (!(snaps.times[i] > snaps.times[i - 1])) throw InvalidInput("functionals: snapshot times must increase");
  const double horizon = std::pow(R, alpha);
  if (snaps.times.front() > 0.0 || snaps.times.back() < horizon) {
    std::ostringstream msg;
    msg << "functionals: snapshots cover [" << snaps.times.front() << ", " << snaps.times.back()
        << "], need [0, T] with T >= R^alpha = " << horizon;
    throw InvalidInput(msg.str());
  }
  const Grid& g = snaps.u.front().grid;
  if (g.dim() != params.n) throw InvalidInput("functionals: grid dimension differs from n");

  const double delta0 = std::min(params.delta1, params.delta2);
  const BracketWeight psi(params.n + 2.0 * delta0);
  const double xscale = std::pow(R, -beta);
  std::vector<double> weight(g.size());
  {
    const auto radii = g.radii();
    for (std::size_t i = 0; i < g.size(); ++i) weight[i] = psi.radial(xscale * radii[i]) * g.cell_volume();
  }
  FunctionalValues out;
  out.coverage_warning = psi.radial(xscale * g.half_width()) > 1e-3;

  const TemporalCutoff phi = cutoff_build(std::min(params.p, params.q), 100);
  std::vector<double> gi, gj;
  for (std::size_t k = 0; k < snaps.times.size(); ++k) {
    const double ft = phi.value(snaps.times[k] / horizon);
    double si = 0.0, sj = 0.0;
    if (ft > 0.0) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        si += std::pow(std::abs(snaps.v[k].values[i]), params.p) * weight[i];
        sj += std::pow(std::abs(snaps.u[k].values[i]), params.q) * weight[i];
      }
    }
    gi.push_back(ft * si);
    gj.push_back(ft * sj);
  }

  // Trapezoid of a piecewise-linear integrand clipped to [a, b].
  auto clipped = [&](const std::vector<double>& gv, double a, double b) {
    double acc = 0.0;
    for (std::size_t k = 1; k < snaps.times.size(); ++k) {
      const double t0 = snaps.times[k - 1], t1 = snaps.times[k];
      const double lo = std::max(a, t0), hi = std::min(b, t1);
      if (!(hi > lo)) continue;
      auto lerp = [&](double t) { return gv[k - 1] + (gv[k] - gv[k - 1]) * (t - t0) / (t1 - t0); };
      acc += 0.5 * (lerp(lo) + lerp(hi)) * (hi - lo);
    }
    return acc;
  };
  out.I = clipped(gi, 0.0, horizon);
  out.J = clipped(gj, 0.0, horizon);
  out.I_t = clipped(gi, 0.5 * horizon, horizon);
  out.J_t = clipped(gj, 0.5 * horizon, horizon);
  return out;
}

// ---------------------------------------------------------------- scalings and constants

template <class T>
BasicScalings<T> blowup_scalings(const BasicParams<T>& params) {
  validate(params);
  BasicScalings<T> out;
  const BasicParams<T> p = params.delta2 > params.delta1 ? params.swapped() : params;
  out.swapped = params.delta2 > params.delta1;
  const T one(1), two(2);
  const T n(p.n);
  const T w = (p.delta1 - p.delta2) / (two * (one - p.delta2));
  out.alpha = two - two * p.delta1 + w * (n * p.q - n - two * p.q) * (n - two) / (one + p.q);
  out.beta = one - w * (n * p.q + two - n) / (one + p.q);
  const T mix = out.alpha + n * out.beta;
  const T inv_pc = one - one / p.p;  // 1/p'
  const T inv_qc = one - one / p.q;
  out.gamma1 = -two * out.beta + mix * inv_qc + (-two * out.beta + mix * inv_pc) / p.q;
  out.gamma2 = -two * out.beta + mix * inv_pc + (-two * out.beta + mix * inv_qc) / p.p;
  const T rhs = -two * out.beta;
  out.chain = {-two * out.alpha <= rhs, -out.alpha - two * p.delta1 * out.beta <= rhs,
               -out.alpha - two * p.delta2 * out.beta <= rhs};
  return out;
}

template Scalings blowup_scalings<double>(const SystemParams&);
template ExactScalings blowup_scalings<Rational>(const ExactParams&);

CriticalConstants critical_constants(const SystemParams& params, double delta0) {
  validate(params);
  if (params.n < 1 || params.n > 3) throw InvalidInput("critical_constants: n must be 1, 2 or 3");
  if (!(delta0 > 0.0) || delta0 > 0.5)
    throw InvalidInput("critical_constants: delta0 must lie in (0, 0.5]; at delta0 = 0 the bracket integral diverges");
  // r = tan(theta) turns the radial integral into int sin^{n-1} cos^{2 delta0 - 1} over [0, pi/2].
  const double half_pi = 0.5 * pi;
  auto f = [&](double th, double thc) {
    const double c = th > 0.5 * half_pi ? std::sin(thc) : std::cos(th);
    return std::pow(std::sin(th), params.n - 1) * std::pow(c, 2.0 * delta0 - 1.0);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  const double val = ts.integrate(f, 0.0, half_pi, 1e-12, &err);
  if (!(err <= 1e-9 * std::abs(val))) throw NumericalFailure("critical_constants: quadrature did not converge", err);
  CriticalConstants c;
  c.bracket_integral = sphere_area(params.n) * val;
  c.D_p = std::pow(c.bracket_integral, 1.0 - 1.0 / params.p);
  c.D_q = std::pow(c.bracket_integral, 1.0 - 1.0 / params.q);
  c.mass_threshold = c.bracket_integral;
  return c;
}

}  // namespace sdw
