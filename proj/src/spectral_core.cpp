#include "sdw/spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "sdw/errors.hpp"

namespace sdw {

namespace {

using std::numbers::pi;

// Plans are created once per (dim, N, sign) and shared; fftw_execute_dft is
// reentrant, only the planner needs the lock.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
    std::vector<cplx> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::array<int, 3> dims{n, n, n};
    fftw_plan plan = fftw_plan_dft(dim, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw InvalidInput(std::string(where) + ": grid mismatch");
}

// (-1)^(sum of indices) -- the phase from the left endpoint x_0 = -L.
inline double parity(const Grid& g, std::size_t flat) {
  auto idx = g.unravel(flat);
  int s = 0;
  for (int d = 0; d < g.dim(); ++d) s += idx[d];
  return (s & 1) ? -1.0 : 1.0;
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double half_width)
    : dim_(dim), n_(points_per_axis), half_width_(half_width) {
  if (dim < 1 || dim > 3) throw InvalidInput("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw InvalidInput("points_per_axis must be even and >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidInput("half_width must be positive and finite");
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_);

  auto xi = std::make_shared<std::vector<double>>(size_);
  auto r = std::make_shared<std::vector<double>>(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto idx = unravel(i);
    double s2 = 0.0, x2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      double f = frequency(idx[d]);
      double x = coordinate(idx[d]);
      s2 += f * f;
      x2 += x * x;
    }
    (*xi)[i] = std::sqrt(s2);
    (*r)[i] = std::sqrt(x2);
  }
  freq_norms_ = std::move(xi);
  radii_ = std::move(r);
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double Grid::freq_cell_volume() const noexcept { return std::pow(pi / half_width_, dim_); }

double Grid::frequency(int index) const noexcept { return pi * wavenumber(index) / half_width_; }

std::array<int, 3> Grid::unravel(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

RealField::RealField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

RealField::RealField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidInput("RealField: sample count does not match grid");
}

RealField RealField::sample(const Grid& g, const std::function<double(std::span<const double>)>& f) {
  RealField out(g);
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    for (int d = 0; d < g.dim(); ++d) x[d] = g.coordinate(idx[d]);
    out.values[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim())));
  }
  return out;
}

SpectralField::SpectralField(Grid g) : grid(std::move(g)), values(grid.size(), cplx{}) {}

SpectralField::SpectralField(Grid g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidInput("SpectralField: coefficient count does not match grid");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid, other.grid, "SpectralField::operator+=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : values) c *= s;
  return *this;
}

SpectralField forward(const RealField& f) {
  const Grid& g = f.grid;
  if (f.values.size() != g.size()) throw InvalidInput("forward: sample count does not match grid");
  std::vector<cplx> buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(f.values[i])) throw InvalidInput("forward: non-finite sample");
    buf[i] = f.values[i];
  }
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(PlanCache::instance().get(g.dim(), g.points_per_axis(), FFTW_FORWARD), p, p);
  const double scale = g.cell_volume() * std::pow(2.0 * pi, -0.5 * g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] *= scale * parity(g, i);
  return SpectralField(g, std::move(buf));
}

RealField inverse(const SpectralField& F, double* max_imag) {
  const Grid& g = F.grid;
  if (F.values.size() != g.size()) throw InvalidInput("inverse: coefficient count does not match grid");
  std::vector<cplx> buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(F.values[i].real()) || !std::isfinite(F.values[i].imag()))
      throw InvalidInput("inverse: non-finite coefficient");
    buf[i] = F.values[i] * parity(g, i);
  }
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(PlanCache::instance().get(g.dim(), g.points_per_axis(), FFTW_BACKWARD), p, p);
  const double scale = g.freq_cell_volume() * std::pow(2.0 * pi, -0.5 * g.dim());
  RealField out(g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.values[i] = buf[i].real() * scale;
    worst = std::max(worst, std::abs(buf[i].imag() * scale));
  }
  if (max_imag) *max_imag = worst;
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, const std::function<cplx(double)>& sym) {
  SpectralField out(F.grid);
  auto xi = F.grid.frequency_norms();
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    cplx s = sym(xi[i]);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      std::ostringstream msg;
      msg << "apply_multiplier: symbol not finite at |xi| = " << xi[i];
      throw InvalidInput(msg.str());
    }
    out.values[i] = s * F.values[i];
  }
  return out;
}

SpectralField apply_table(const SpectralField& F, std::span<const double> table) {
  if (table.size() != F.values.size()) throw InvalidInput("apply_table: table size does not match grid");
  SpectralField out(F.grid);
  for (std::size_t i = 0; i < F.values.size(); ++i) out.values[i] = table[i] * F.values[i];
  return out;
}

double plancherel_pairing(const RealField& f, const RealField& g) {
  require_same_grid(f.grid, g.grid, "plancherel_pairing");
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return s * f.grid.cell_volume();
}

double spectral_pairing(const SpectralField& F, const SpectralField& G) {
  require_same_grid(F.grid, G.grid, "spectral_pairing");
  double s = 0.0;
  for (std::size_t i = 0; i < F.values.size(); ++i) s += (F.values[i] * std::conj(G.values[i])).real();
  return s * F.grid.freq_cell_volume();
}

double l2_norm(const RealField& f) { return std::sqrt(plancherel_pairing(f, f)); }

double l2_norm(const SpectralField& F) { return sobolev_seminorm(F, 0.0); }

double sobolev_seminorm(const SpectralField& F, double order) {
  auto xi = F.grid.frequency_norms();
  double s = 0.0;
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    double w = order == 0.0 ? 1.0 : std::pow(xi[i], order);
    s += w * w * std::norm(F.values[i]);
  }
  return std::sqrt(s * F.grid.freq_cell_volume());
}

double lp_norm(const RealField& f, double p) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

double sup_norm(const RealField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double integral(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

double hermitian_defect(const SpectralField& F) {
  const Grid& g = F.grid;
  const int n = g.points_per_axis();
  double scale = 0.0, worst = 0.0;
  for (const auto& c : F.values) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    std::size_t mirror = 0;
    for (int d = 0; d < g.dim(); ++d) mirror = mirror * n + static_cast<std::size_t>((n - idx[d]) % n);
    worst = std::max(worst, std::abs(F.values[mirror] - std::conj(F.values[i])));
  }
  return worst / scale;
}

void truncate_two_thirds(SpectralField& F) {
  const Grid& g = F.grid;
  const int cutoff = g.points_per_axis() / 3;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    for (int d = 0; d < g.dim(); ++d) {
      if (std::abs(g.wavenumber(idx[d])) > cutoff) {
        F.values[i] = 0.0;
        break;
      }
    }
  }
}

}  // namespace sdw
