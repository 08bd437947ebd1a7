#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sdw/errors.hpp"
#include "sdw/spectral_core.hpp"
#include "sdw/testfn_lab.hpp"

using namespace sdw;
using std::numbers::pi;

namespace {

RealField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealField f(g);
  for (auto& v : f.values) v = nd(rng);
  return f;
}

// O(N^{2n}) transform straight from the definition.
std::vector<cplx> direct_dft(const RealField& f) {
  const Grid& g = f.grid;
  const double dxn = std::pow(g.spacing(), g.dim());
  const double norm = std::pow(2.0 * pi, -0.5 * g.dim());
  std::vector<cplx> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto ki = g.unravel(k);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      auto ji = g.unravel(j);
      double phase = 0.0;
      for (int d = 0; d < g.dim(); ++d) phase += g.frequency(ki[d]) * g.coordinate(ji[d]);
      acc += f.values[j] * std::polar(1.0, -phase);
    }
    out[k] = norm * dxn * acc;
  }
  return out;
}

double rel_l2_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(Grid, Invariants) {
  Grid g(2, 16, 3.0);
  EXPECT_NEAR(g.cell_volume() * 256.0, 36.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.frequency(1), pi / 3.0);
  EXPECT_DOUBLE_EQ(g.frequency(15), -pi / 3.0);
  EXPECT_DOUBLE_EQ(g.frequency(8), -8.0 * pi / 3.0);
  EXPECT_DOUBLE_EQ(g.coordinate(0), -3.0);
  EXPECT_THROW(Grid(1, 7, 1.0), InvalidInput);
  EXPECT_THROW(Grid(1, 6, 1.0), InvalidInput);
  EXPECT_THROW(Grid(4, 8, 1.0), InvalidInput);
  EXPECT_THROW(Grid(1, 8, 0.0), InvalidInput);
}

TEST(Transform, MatchesDirectDft) {
  for (int dim : {1, 2}) {
    Grid g(dim, dim == 1 ? 32 : 12, 2.5);
    RealField f = random_field(g, 11 + dim);
    SpectralField F = forward(f);
    auto ref = direct_dft(f);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      worst = std::max(worst, std::abs(F.values[k] - ref[k]));
      scale = std::max(scale, std::abs(ref[k]));
    }
    EXPECT_LT(worst / scale, 1e-12) << "dim " << dim;
  }
}

TEST(Transform, ConstantFieldIsZeroMode) {
  Grid g(2, 16, 5.0);
  RealField f(g, std::vector<double>(g.size(), 1.0));
  SpectralField F = forward(f);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_LE(std::abs(F.values[k]), 1e-13);
  EXPECT_GT(std::abs(F.values[0]), 1.0);
}

TEST(Transform, SingleCosineMode) {
  const double L = 4.0;
  Grid g(1, 32, L);
  auto f = RealField::sample(g, [&](std::span<const double> x) { return std::cos(pi * x[0] / L); });
  SpectralField F = forward(f);
  const double top = std::abs(F.values[1]);
  EXPECT_NEAR(std::abs(F.values[31]), top, 1e-13 * top);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k == 1 || k == 31) continue;
    EXPECT_LE(std::abs(F.values[k]), 1e-13 * top);
  }
}

TEST(Transform, RoundTripAndParseval) {
  for (int dim : {1, 2, 3}) {
    Grid g(dim, dim == 3 ? 16 : 32, 7.0);
    RealField f = random_field(g, 3 * dim);
    SpectralField F = forward(f);
    double imag = 1.0;
    RealField back = inverse(F, &imag);
    EXPECT_LT(rel_l2_diff(back.values, f.values), 1e-12);
    EXPECT_LT(imag, 1e-12);
    const double phys = std::pow(l2_norm(f), 2), freq = std::pow(l2_norm(F), 2);
    EXPECT_LE(std::abs(phys - freq), 1e-12 * phys);
    EXPECT_LT(hermitian_defect(F), 1e-12);
  }
}

TEST(Transform, RejectsNonFinite) {
  Grid g(1, 8, 1.0);
  RealField f(g);
  f.values[3] = std::nan("");
  EXPECT_THROW(forward(f), InvalidInput);
  EXPECT_THROW(RealField(g, std::vector<double>(5, 0.0)), InvalidInput);
  RealField wrong(g);
  wrong.values.resize(5);
  EXPECT_THROW(forward(wrong), InvalidInput);
}

TEST(Multiplier, IdentityAndLaplacianEigenfunction) {
  const double L = 3.0;
  Grid g(1, 64, L);
  auto f = RealField::sample(g, [&](std::span<const double> x) { return std::cos(pi * x[0] / L); });
  SpectralField F = forward(f);
  SpectralField same = apply_multiplier(F, [](double) { return cplx(1.0); });
  EXPECT_EQ(same.values, F.values);
  RealField lap = inverse(apply_multiplier(F, [](double k) { return cplx(k * k); }));
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(lap.values[i], std::pow(pi / L, 2) * f.values[i], 1e-10);
}

TEST(Multiplier, CompositionAndHermitian) {
  Grid g(2, 16, 4.0);
  SpectralField F = forward(random_field(g, 5));
  auto a = [](double k) { return cplx(std::exp(-k)); };
  auto b = [](double k) { return cplx(1.0 + k * k); };
  SpectralField ab = apply_multiplier(apply_multiplier(F, a), b);
  SpectralField direct = apply_multiplier(F, [&](double k) { return a(k) * b(k); });
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_LE(std::abs(ab.values[i] - direct.values[i]), 1e-12 * (1.0 + std::abs(direct.values[i])));
  EXPECT_LT(hermitian_defect(ab), 1e-12);
}

TEST(Multiplier, RejectsNonFiniteSymbolNamingFrequency) {
  Grid g(1, 8, 1.0);
  SpectralField F = forward(random_field(g, 1));
  try {
    apply_multiplier(F, [](double k) { return cplx(1.0 / k); });
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("|xi| = 0"), std::string::npos) << e.what();
  }
}

namespace {

double grid_fractional_at_origin(int N, double L, double s) {
  Grid g(1, N, L);
  RealField f = RealField::sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
  RealField out = inverse(apply_multiplier(forward(f), [&](double k) { return cplx(std::pow(k, 2.0 * s)); }));
  return out.values[N / 2];
}

}  // namespace

TEST(Multiplier, FractionalPowerMatchesPrincipalValue) {
  const double s = 0.3;
  auto gauss = [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); };
  const double x0[1] = {0.0};
  const double pv = pv_fractional_laplacian(gauss, x0, s, 1).value;
  // Closed form: (2 pi)^{-1/2} int |xi|^{2s} e^{-xi^2/2} = 2^s Gamma(s + 1/2) / sqrt(pi).
  EXPECT_NEAR(pv, std::pow(2.0, s) * std::tgamma(s + 0.5) / std::sqrt(pi), 1e-8);

  // On [-20, 20) the grid sees the periodic extension; the images shift the
  // value by about C_{1,s} sqrt(2 pi) 2 zeta(1 + 2s) (2L)^{-1-2s}.
  const double L = 20.0;
  const double zeta = 2.2857656541;  // zeta(1.6)
  const double images = fractional_constant(1, s) * std::sqrt(2.0 * pi) * 2.0 * zeta * std::pow(2.0 * L, -1.0 - 2.0 * s);
  const double small_box = grid_fractional_at_origin(256, L, s);
  EXPECT_NEAR((pv - small_box) / images, 1.0, 0.02);
  // A box wide enough for the images to fall below the tolerance.
  EXPECT_NEAR(grid_fractional_at_origin(65536, 2048.0, s), pv, 1e-5);
}

TEST(Pairing, ZeroAndGaussian) {
  Grid g(1, 256, 20.0);
  RealField zero(g);
  EXPECT_EQ(plancherel_pairing(zero, zero), 0.0);
  auto f = RealField::sample(g, [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); });
  EXPECT_NEAR(plancherel_pairing(f, f) / std::sqrt(pi), 1.0, 1e-8);
}

TEST(Pairing, PhysicalEqualsFrequencySide) {
  for (int dim : {1, 2, 3}) {
    Grid g(dim, dim == 3 ? 8 : 32, 3.0);
    RealField f = random_field(g, 21 + dim), h = random_field(g, 41 + dim);
    const double phys = plancherel_pairing(f, h);
    const double freq = spectral_pairing(forward(f), forward(h));
    EXPECT_LE(std::abs(phys - freq), 1e-10 * l2_norm(f) * l2_norm(h));
  }
  Grid a(1, 8, 1.0), b(1, 8, 2.0);
  EXPECT_THROW(plancherel_pairing(RealField(a), RealField(b)), InvalidInput);
}

TEST(Norms, SobolevAndLp) {
  const double L = 2.0;
  Grid g(1, 64, L);
  auto f = RealField::sample(g, [&](std::span<const double> x) { return std::sin(pi * x[0] / L); });
  SpectralField F = forward(f);
  EXPECT_NEAR(l2_norm(f), std::sqrt(L), 1e-12);
  EXPECT_NEAR(sobolev_seminorm(F, 1.0), pi / L * std::sqrt(L), 1e-10);
  EXPECT_NEAR(sup_norm(f), 1.0, 1e-12);
  EXPECT_NEAR(lp_norm(f, 2.0), l2_norm(f), 1e-12);
  EXPECT_NEAR(integral(f), 0.0, 1e-12);
}

TEST(Dealias, TwoThirdsRule) {
  Grid g(1, 24, 1.0);
  SpectralField F(g, std::vector<cplx>(g.size(), cplx(1.0)));
  truncate_two_thirds(F);
  for (int i = 0; i < 24; ++i) {
    const int k = std::abs(g.wavenumber(i));
    EXPECT_EQ(F.values[i] == cplx(0.0), k > 8) << "k = " << k;
  }
}
