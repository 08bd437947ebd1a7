#include "sdw/rate_lab.hpp"

#include <cmath>

#include "sdw/errors.hpp"

namespace sdw {

const char* to_string(RateSource s) {
  switch (s) {
    case RateSource::Prop21: return "Prop21";
    case RateSource::Prop22: return "Prop22";
    case RateSource::Cor21: return "Cor21";
    case RateSource::Thm11: return "Thm11";
    case RateSource::Thm12: return "Thm12";
  }
  return "unknown";
}

namespace {

template <class T>
ValidityCheck strict_greater(std::string id, const T& lhs, const T& rhs) {
  return ValidityCheck{std::move(id), lhs > rhs, to_double(T(lhs - rhs))};
}

int weight_index(int j, int k) {
  if (j == 0 && k == 0) return 0;
  if (j == 0 && k == 1) return 1;
  if (j == 1 && k == 0) return 2;
  throw InvalidInput("theorem rates exist only for (j,k) in {(0,0),(0,1),(1,0)}");
}

}  // namespace

template <class T>
BasicRatePrediction<T> predicted_exponents(int n, const T& m, const T& delta, int j, int k, RateSource source) {
  if (n < 1) throw InvalidInput("predicted_exponents: n must be >= 1");
  if (j < 0 || j > 1) throw InvalidInput("predicted_exponents: j must be 0 or 1");
  if (k < 0) throw InvalidInput("predicted_exponents: k must be >= 0");
  if (!(m >= T(1) && m <= T(2))) throw InvalidInput("predicted_exponents: m must lie in [1, 2]");
  if (!(delta >= T(0) && delta <= T(1) / 2)) throw InvalidInput("predicted_exponents: delta must lie in [0, 0.5]");

  BasicRatePrediction<T> out;
  out.source = source;
  out.j = j;
  out.k = k;
  const T base = detail::base_rate(n, m, delta);
  const T den = T(2) * (T(1) - delta);
  switch (source) {
    case RateSource::Prop21:
      out.exponent_w0 = base - (T(k) + T(2 * j) * delta) / den;
      out.exponent_w1 = base - T(k) / den - T(j) + T(1);
      break;
    case RateSource::Prop22:
    case RateSource::Cor21: {
      out.exponent_w0 = base - T(k) / den - T(j);
      out.exponent_w1 = base - (T(k) - T(2) * delta) / den - T(j);
      out.validity.push_back(ValidityCheck{"m<2", m < T(2), to_double(T(T(2) - m))});
      if (m < T(2)) {
        const T m0 = T(2) * m / (T(2) - m);
        out.validity.push_back(strict_greater("n>2*m0*delta", T(n), T(T(2) * m0 * delta)));
      }
      break;
    }
    default:
      throw InvalidInput("predicted_exponents: theorem sources need the full parameter tuple");
  }
  return out;
}

template <class T>
BasicRatePrediction<T> predicted_exponents(const BasicParams<T>& params, Component which, int j, int k,
                                           RateSource source, const T& slack) {
  const T& delta = which == Component::U ? params.delta1 : params.delta2;
  if (source == RateSource::Prop21 || source == RateSource::Prop22) {
    return predicted_exponents(params.n, params.m, delta, j, k, source);
  }
  if (source == RateSource::Cor21) {
    auto out = predicted_exponents(params.n, params.m, delta, j, k, source);
    const T dmax = params.delta1 > params.delta2 ? params.delta1 : params.delta2;
    out.validity.push_back(strict_greater("n>2*m0*max(delta1,delta2)", T(params.n), T(T(2) * params.m0() * dmax)));
    return out;
  }
  const auto w = solution_space_weights(params, source, slack);
  const int idx = weight_index(j, k);
  BasicRatePrediction<T> out;
  out.source = source;
  out.j = j;
  out.k = k;
  out.exponent_w0 = out.exponent_w1 = which == Component::U ? w.f[idx] : w.g[idx];
  const bool thm11 = source == RateSource::Thm11;
  const T& dlead = thm11 ? params.delta1 : params.delta2;
  const T& dother = thm11 ? params.delta2 : params.delta1;
  out.validity.push_back(ValidityCheck{thm11 ? "delta1>=delta2" : "delta2>=delta1", dlead >= dother,
                                       to_double(T(dlead - dother))});
  out.validity.push_back(strict_greater("n>2*m0*delta", T(params.n), T(T(2) * params.m0() * dlead)));
  return out;
}

template <class T>
BasicLossOfDecay<T> loss_of_decay(const BasicParams<T>& params, Component which, double slack) {
  const T& delta = which == Component::U ? params.delta2 : params.delta1;
  const T& power = which == Component::U ? params.p : params.q;
  const T n(params.n);
  BasicLossOfDecay<T> out;
  out.value = T(1) - n / (T(2) * params.m * (T(1) - delta)) * (power - T(1)) + power * delta / (T(1) - delta);
  out.slack = slack;
  return out;
}

template <class T>
BasicWeights<T> solution_space_weights(const BasicParams<T>& params, RateSource theorem, const T& slack) {
  if (theorem != RateSource::Thm11 && theorem != RateSource::Thm12)
    throw InvalidInput("solution_space_weights: theorem must be Thm11 or Thm12");
  auto lin = [&](const T& delta) {
    const T b = detail::base_rate(params.n, params.m, delta);
    return std::array<T, 3>{b + delta / (T(1) - delta), b - (T(1) - T(2) * delta) / (T(2) * (T(1) - delta)),
                            b - (T(1) - T(2) * delta) / (T(1) - delta)};
  };
  BasicWeights<T> w{lin(params.delta1), lin(params.delta2)};
  if (theorem == RateSource::Thm11) {
    const T loss = loss_of_decay(params, Component::U).value + slack;
    for (auto& e : w.f) e += loss;
  } else {
    const T loss = loss_of_decay(params, Component::V).value + slack;
    for (auto& e : w.g) e += loss;
  }
  return w;
}

RateFit fit_rate(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi) {
  if (times.size() != values.size()) throw InvalidInput("fit_rate: times and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidInput("fit_rate: nonpositive or non-finite value in window (blow-up or underflow)");
    xs.push_back(std::log1p(times[i]));
    ys.push_back(std::log(values[i]));
  }
  const std::size_t count = xs.size();
  if (count < 8) throw InvalidInput("fit_rate: fewer than 8 samples in window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit_rate: all samples share one abscissa");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = ys[i] - my - slope * (xs[i] - mx);
    rss += r * r;
  }
  return RateFit{slope, std::sqrt(rss / static_cast<double>(count - 2) / sxx), count};
}

template <class T>
BasicGnTheta<T> gn_theta(const T& s, const T& sigma, const T& p, const T& p0, const T& p1, int n) {
  BasicGnTheta<T> out;
  if (n < 1 || !(p > T(1)) || !(p0 > T(1)) || !(p1 > T(1)) || !(sigma > T(0))) return out;
  if (!(s >= T(0) && s <= sigma)) return out;
  const T nn(n);
  const T den = T(1) / p0 - T(1) / p1 + sigma / nn;
  if (den == T(0)) return out;
  out.theta = (T(1) / p0 - T(1) / p + s / nn) / den;
  out.applicable = out.theta >= s / sigma && out.theta <= T(1);
  return out;
}

double gn_check(const RealField& u, double s, double sigma, double p, double p0, double p1) {
  if (p != 2.0 || p0 != 2.0 || p1 != 2.0)
    throw InvalidInput("gn_check: grid evaluation supports only p = p0 = p1 = 2");
  const auto th = gn_theta(s, sigma, p, p0, p1, u.grid.dim());
  if (!th.applicable) throw InvalidInput("gn_check: Gagliardo-Nirenberg exponent not applicable");
  const SpectralField U = forward(u);
  const double lhs = sobolev_seminorm(U, s);
  const double rhs = std::pow(sobolev_seminorm(U, 0.0), 1.0 - th.theta) * std::pow(sobolev_seminorm(U, sigma), th.theta);
  if (!(rhs > 0.0)) throw InvalidInput("gn_check: zero field");
  return lhs / rhs;
}

#define SDW_INSTANTIATE(T)                                                                                      \
  template BasicRatePrediction<T> predicted_exponents<T>(int, const T&, const T&, int, int, RateSource);        \
  template BasicRatePrediction<T> predicted_exponents<T>(const BasicParams<T>&, Component, int, int, RateSource, \
                                                         const T&);                                             \
  template BasicLossOfDecay<T> loss_of_decay<T>(const BasicParams<T>&, Component, double);                      \
  template BasicWeights<T> solution_space_weights<T>(const BasicParams<T>&, RateSource, const T&);              \
  template BasicGnTheta<T> gn_theta<T>(const T&, const T&, const T&, const T&, const T&, int);

SDW_INSTANTIATE(double)
SDW_INSTANTIATE(Rational)

#undef SDW_INSTANTIATE

}  // namespace sdw
