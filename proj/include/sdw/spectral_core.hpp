#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace sdw {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L, L)^n with N points per axis.
///
/// Frequencies follow xi_k = pi k / L with k in {-N/2, ..., N/2-1}. Spectral
/// arrays are stored in FFT order along every axis (index i carries k = i
/// for i < N/2 and k = i - N otherwise), flattened row-major.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double half_width);

  int dim() const noexcept { return dim_; }
  int points_per_axis() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  std::size_t size() const noexcept { return size_; }

  double cell_volume() const noexcept;
  double freq_cell_volume() const noexcept;

  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  double frequency(int index) const noexcept;
  double coordinate(int index) const noexcept { return -half_width_ + index * spacing(); }

  std::array<int, 3> unravel(std::size_t flat) const noexcept;

  /// |xi| for every flat spectral index (cached, shared between copies).
  std::span<const double> frequency_norms() const noexcept { return *freq_norms_; }
  /// |x| for every flat physical index.
  std::span<const double> radii() const noexcept { return *radii_; }

  bool operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  int dim_;
  int n_;
  double half_width_;
  std::size_t size_;
  std::shared_ptr<const std::vector<double>> freq_norms_;
  std::shared_ptr<const std::vector<double>> radii_;
};

struct RealField {
  Grid grid;
  std::vector<double> values;

  explicit RealField(Grid g);
  RealField(Grid g, std::vector<double> v);

  /// Samples f(x) at every grid point.
  static RealField sample(const Grid& g, const std::function<double(std::span<const double>)>& f);
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> values;

  explicit SpectralField(Grid g);
  SpectralField(Grid g, std::vector<cplx> v);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator*=(double s);
};

/// Unitary transform: fhat(xi_k) = (2 pi)^{-n/2} sum_j f(x_j) e^{-i xi_k x_j} dx^n.
SpectralField forward(const RealField& f);

/// Inverse of forward(). If max_imag is non-null it receives the largest
/// imaginary part discarded when projecting back to real values.
RealField inverse(const SpectralField& F, double* max_imag = nullptr);

/// coef(k) <- sym(|xi_k|) coef(k). Throws InvalidInput naming |xi| when
/// the symbol is not finite at a grid frequency.
SpectralField apply_multiplier(const SpectralField& F, const std::function<cplx(double)>& sym);

/// Multiplies by a precomputed per-index table (size must equal grid.size()).
SpectralField apply_table(const SpectralField& F, std::span<const double> table);

/// sum f g dx^n.
double plancherel_pairing(const RealField& f, const RealField& g);

/// Re sum F conj(G) (pi/L)^n, the frequency-side of the pairing.
double spectral_pairing(const SpectralField& F, const SpectralField& G);

double l2_norm(const RealField& f);
double l2_norm(const SpectralField& F);
/// ||F|xi|^k||, the L^2 norm of |D|^k applied to the field.
double sobolev_seminorm(const SpectralField& F, double order);
double lp_norm(const RealField& f, double p);
double sup_norm(const RealField& f);
double integral(const RealField& f);

/// Largest |coef(-k) - conj(coef(k))| relative to the largest coefficient.
double hermitian_defect(const SpectralField& F);

/// Zeroes every coefficient with |k| > N/3 along some axis.
void truncate_two_thirds(SpectralField& F);

}  // namespace sdw
