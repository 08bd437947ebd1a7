#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sdw/params.hpp"
#include "sdw/spectral_core.hpp"

namespace sdw {

/// Where a decay exponent comes from.
///  - Prop21: (L^m cap L^2)-L^2 estimate valid in every dimension.
///  - Prop22 / Cor21: sharper estimate, needs n > 2 m0 delta.
///  - Thm11 / Thm12: decay of the coupled solution, including loss of decay.
enum class RateSource { Prop21, Prop22, Cor21, Thm11, Thm12 };

const char* to_string(RateSource s);

enum class Component { U, V };

struct ValidityCheck {
  std::string id;
  bool holds = false;
  double margin = 0.0;
};

/// Exponents a0, a1 of (1+t)^{a0} ||w0|| + (1+t)^{a1} ||w1||.
template <class T>
struct BasicRatePrediction {
  RateSource source = RateSource::Cor21;
  int j = 0;
  int k = 0;
  T exponent_w0 = T(0);
  T exponent_w1 = T(0);
  std::vector<ValidityCheck> validity;

  bool valid() const {
    for (const auto& v : validity)
      if (!v.holds) return false;
    return true;
  }
};

using RatePrediction = BasicRatePrediction<double>;
using ExactRatePrediction = BasicRatePrediction<Rational>;

/// Default for the "sufficiently small positive" epsilon in the loss of decay.
inline constexpr double kDefaultSlack = 1e-3;

template <class T>
struct BasicLossOfDecay {
  T value = T(0);  ///< the loss with the epsilon term removed
  double slack = kDefaultSlack;
};

using LossOfDecay = BasicLossOfDecay<double>;
using ExactLossOfDecay = BasicLossOfDecay<Rational>;

/// Exponents of the six solution-space weights: f1..f3 for u (L^2, grad, t-derivative)
/// and g1..g3 for v. Each weight is (1+t)^{exponent}.
template <class T>
struct BasicWeights {
  std::array<T, 3> f;
  std::array<T, 3> g;
};

using Weights = BasicWeights<double>;
using ExactWeights = BasicWeights<Rational>;

namespace detail {

// -n/(2(1-delta)) (1/m - 1/2)
template <class T>
T base_rate(int n, const T& m, const T& delta) {
  return -T(n) / (T(2) * (T(1) - delta)) * (T(1) / m - T(1) / 2);
}

}  // namespace detail

/// Exponents for ||d_t^j grad^k w(t)||_{L^2}. m = 2 yields the L^2-L^2 estimate
/// of Prop21. Throws InvalidInput for j outside {0,1}, k < 0, m outside [1,2]
/// or delta outside [0,1/2], and for the theorem sources (use the params overload).
template <class T>
BasicRatePrediction<T> predicted_exponents(int n, const T& m, const T& delta, int j, int k, RateSource source);

/// Theorem-aware overload: Prop/Cor sources use delta1 (component U) or delta2 (V);
/// Thm11/Thm12 report the solution-space weight exponent (with loss of decay and
/// slack) in both fields, for (j,k) in {(0,0),(0,1),(1,0)}.
template <class T>
BasicRatePrediction<T> predicted_exponents(const BasicParams<T>& params, Component which, int j, int k,
                                           RateSource source, const T& slack = T(kDefaultSlack));

/// eps(p, delta2) for Component::U (the loss carried by u in Thm11),
/// eps(q, delta1) for Component::V (the loss carried by v in Thm12).
template <class T>
BasicLossOfDecay<T> loss_of_decay(const BasicParams<T>& params, Component which, double slack = kDefaultSlack);

/// Weight exponents of the solution space used by Thm11 or Thm12; the slack is
/// added to every exponent that carries a loss of decay.
template <class T>
BasicWeights<T> solution_space_weights(const BasicParams<T>& params, RateSource theorem, const T& slack = T(kDefaultSlack));

struct RateFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log(value) against log(1+t) over samples with t in
/// [t_lo, t_hi]. Needs at least 8 samples there, all strictly positive.
RateFit fit_rate(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi);

template <class T>
struct BasicGnTheta {
  T theta = T(0);
  bool applicable = false;
};

using GnTheta = BasicGnTheta<double>;
using ExactGnTheta = BasicGnTheta<Rational>;

/// Interpolation exponent (1/p0 - 1/p + s/n) / (1/p0 - 1/p1 + sigma/n) of the
/// fractional Gagliardo-Nirenberg inequality; applicable when 1 < p, p0, p1,
/// sigma > 0, 0 <= s <= sigma and s/sigma <= theta <= 1.
template <class T>
BasicGnTheta<T> gn_theta(const T& s, const T& sigma, const T& p, const T& p0, const T& p1, int n);

/// ||u||_{H^s} / (||u||_{L^2}^{1-theta} ||u||_{H^sigma}^theta) on the grid, with
/// homogeneous Sobolev norms taken through |xi|-multipliers. Only the
/// p = p0 = p1 = 2 scale is supported.
double gn_check(const RealField& u, double s, double sigma, double p = 2.0, double p0 = 2.0, double p1 = 2.0);

}  // namespace sdw
