#include "sdw/linear_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdw/errors.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

namespace {

// sinh(z)/z and sin(z)/z, series near zero.
double sinhc(double z) {
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 0.5)) throw InvalidInput("delta must lie in [0, 0.5]");
}

KernelValues finish(double k0, double k1, double dk1, double r2, Branch b) {
  return KernelValues{cplx(k0), cplx(k1), cplx(-r2 * k1), cplx(dk1), b};
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::RealDistinct: return "real_distinct";
    case Branch::ComplexPair: return "complex_pair";
    case Branch::Degenerate: return "degenerate";
    case Branch::ZeroFrequency: return "zero_frequency";
  }
  return "unknown";
}

Roots characteristic_roots(double xi_abs, double delta) {
  const double a = std::pow(xi_abs, 2.0 * delta);
  const double h = 0.5 * a;
  const double r2 = xi_abs * xi_abs;
  const double d = h * h - r2;
  if (d >= 0.0) {
    const double s = std::sqrt(d);
    const double l2 = -h - s;
    const double l1 = (h + s) > 0.0 ? -r2 / (h + s) : 0.0;
    return {cplx(l1), cplx(l2)};
  }
  const double w = std::sqrt(-d);
  return {cplx(-h, w), cplx(-h, -w)};
}

Branch classify(double xi_abs, double delta) {
  const double a = std::pow(xi_abs, 2.0 * delta);
  const double r2 = xi_abs * xi_abs;
  if (a == 0.0 && r2 == 0.0) return Branch::ZeroFrequency;
  const double disc = a * a - 4.0 * r2;
  if (std::abs(disc) < kDegenerateThreshold * std::max(a * a, 4.0 * r2)) return Branch::Degenerate;
  return disc > 0.0 ? Branch::RealDistinct : Branch::ComplexPair;
}

double discriminant_zero(double delta) {
  require_delta(delta);
  if (delta == 0.5) return -1.0;
  return std::pow(2.0, 1.0 / (2.0 * delta - 1.0));
}

KernelValues kernel_values_degenerate(double t, double xi_abs, double delta) {
  const double a = std::pow(xi_abs, 2.0 * delta);
  const double h = 0.5 * a;
  const double e = std::exp(-h * t);
  const double k1 = e * t;
  const double k0 = e * (1.0 + h * t);
  return finish(k0, k1, e * (1.0 - h * t), xi_abs * xi_abs, Branch::Degenerate);
}

KernelValues kernel_values(double t, double xi_abs, double delta) {
  const Branch b = classify(xi_abs, delta);
  if (b == Branch::ZeroFrequency) return KernelValues{1.0, t, 0.0, 1.0, b};
  if (b == Branch::Degenerate) return kernel_values_degenerate(t, xi_abs, delta);

  const double a = std::pow(xi_abs, 2.0 * delta);
  const double h = 0.5 * a;
  const double r2 = xi_abs * xi_abs;
  const double d = h * h - r2;

  if (b == Branch::ComplexPair) {
    const double w = std::sqrt(-d);
    const double e = std::exp(-h * t);
    const double s = t * sinc(w * t);
    const double c = std::cos(w * t);
    return finish(e * (c + h * s), e * s, e * (c - h * s), r2, b);
  }

  const double s = std::sqrt(d);
  if (s * t < 0.5) {
    const double e = std::exp(-h * t);
    const double sh = t * sinhc(s * t);
    const double ch = std::cosh(s * t);
    return finish(e * (ch + h * sh), e * sh, e * (ch - h * sh), r2, b);
  }
  // Well-separated exponentials; e^{-h t} cosh(s t) would overflow for large t.
  const double l1 = -r2 / (h + s);
  const double l2 = -h - s;
  const double e1 = std::exp(l1 * t);
  const double e2 = std::exp(l2 * t);
  const double inv = 1.0 / (2.0 * s);
  return finish((l1 * e2 - l2 * e1) * inv, (e1 - e2) * inv, (l1 * e1 - l2 * e2) * inv, r2, b);
}

LinearState evolve_linear(const LinearState& state, double t_target) {
  require_delta(state.delta);
  if (!(state.w.grid == state.wt.grid)) throw InvalidInput("evolve_linear: w and wt on different grids");
  if (!(t_target >= state.t)) throw InvalidInput("evolve_linear: t_target precedes state time");
  const double dt = t_target - state.t;
  LinearState out{SpectralField(state.w.grid), SpectralField(state.w.grid), t_target, state.delta};
  if (dt == 0.0) {
    out.w = state.w;
    out.wt = state.wt;
    return out;
  }
  auto xi = state.w.grid.frequency_norms();
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const KernelValues kv = kernel_values(dt, xi[i], state.delta);
    const cplx w = state.w.values[i];
    const cplx wt = state.wt.values[i];
    out.w.values[i] = kv.k0.real() * w + kv.k1.real() * wt;
    out.wt.values[i] = kv.dk0.real() * w + kv.dk1.real() * wt;
  }
  return out;
}

double sphere_area(int n) {
  if (n < 1) throw InvalidInput("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double radial_norm(double t, double delta, const RadialData& data, int n, int j, int k, double rel_tol) {
  require_delta(delta);
  if (n < 1) throw InvalidInput("radial_norm: dimension must be >= 1");
  if (j < 0 || j > 1 || k < 0 || k > 1) throw InvalidInput("radial_norm: (j, k) must lie in {0,1}^2");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("radial_norm: t must be finite and >= 0");
  if (!data.w0 && !data.w1) return 0.0;

  const double cn = sphere_area(n);
  auto integrand = [&](double r) {
    const KernelValues kv = kernel_values(t, r, delta);
    const double a0 = data.w0 ? data.w0(r) : 0.0;
    const double a1 = data.w1 ? data.w1(r) : 0.0;
    const double v = j == 0 ? kv.k0.real() * a0 + kv.k1.real() * a1 : kv.dk0.real() * a0 + kv.dk1.real() * a1;
    const double weight = (k == 0 ? 1.0 : r * r) * std::pow(r, n - 1);
    return cn * weight * v * v;
  };

  // Panel edges: a geometric ladder plus the kink at the discriminant zero.
  // The damped branch switches on near |xi|^(2 delta) t ~ 1, far below the
  // decay scale when delta is small; start the ladder under both.
  const double scale = std::pow(1.0 + t, -1.0 / (2.0 - 2.0 * delta));
  double low = std::min(1.0, scale);
  if (delta > 0.0) low = std::min(low, std::pow(1.0 + t, -1.0 / (2.0 * delta)));
  std::vector<double> edges{0.0};
  double r = std::max(low * 1e-3, 1e-300);
  const double rd = discriminant_zero(delta);
  while (r < 1e6) {
    if (rd > edges.back() && rd < r) edges.push_back(rd);
    edges.push_back(r);
    r *= 2.0;
  }

  // Panels are judged together: a panel that is negligible against the total
  // need not be resolved to its own relative tolerance.
  double total = 0.0, err = 0.0;
  int quiet = 0;
  for (std::size_t p = 1; p < edges.size(); ++p) {
    // r^(2 delta) is not smooth at the origin.
    quad::Result res = p == 1 ? quad::integrate_endpoint_nothrow(integrand, edges[0], edges[1], rel_tol)
                              : quad::integrate_nothrow(integrand, edges[p - 1], edges[p], rel_tol);
    if (!std::isfinite(res.value)) throw NumericalFailure("radial_norm: non-finite integrand");
    total += res.value;
    err += res.error;
    const bool past_features = edges[p] > std::max({1.0, rd, 8.0 * scale});
    quiet = (past_features && res.value <= 1e-14 * total) ? quiet + 1 : 0;
    if (quiet >= 3) {
      if (!(err <= rel_tol * total) && total > 0.0) {
        std::ostringstream msg;
        msg << "radial_norm: quadrature error " << err << " exceeds " << rel_tol << " of " << total;
        throw NumericalFailure(msg.str(), err);
      }
      return std::sqrt(total);
    }
  }
  throw NumericalFailure("radial_norm: data symbol tail did not decay before |xi| = 1e6", err);
}

}  // namespace sdw
