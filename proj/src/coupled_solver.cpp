#include "sdw/coupled_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sdw/errors.hpp"
#include "sdw/linear_kernels.hpp"
#include "sdw/rate_lab.hpp"

namespace sdw {

CoupledState::CoupledState(const Grid& g, const SystemParams& p) : u(g), ut(g), v(g), vt(g), params(p) {}

const char* to_string(DataKind k) {
  switch (k) {
    case DataKind::GaussianBump: return "GaussianBump";
    case DataKind::SlowDecayProfile: return "SlowDecayProfile";
    case DataKind::SmallEnergy: return "SmallEnergy";
  }
  return "unknown";
}

DataKind parse_data_kind(const std::string& name) {
  if (name == "GaussianBump") return DataKind::GaussianBump;
  if (name == "SlowDecayProfile") return DataKind::SlowDecayProfile;
  if (name == "SmallEnergy") return DataKind::SmallEnergy;
  throw InvalidInput("unknown data kind '" + name + "'");
}

double a_norm(const RealField& f0, const RealField& f1, double m) {
  const SpectralField F0 = forward(f0);
  const double l2 = l2_norm(F0);
  const double grad = sobolev_seminorm(F0, 1.0);
  return lp_norm(f0, m) + std::sqrt(l2 * l2 + grad * grad) + lp_norm(f1, m) + l2_norm(f1);
}

namespace {

RealField random_bumps(const Grid& g, std::mt19937_64& rng, int count, double width) {
  std::uniform_real_distribution<double> centre(-0.25 * g.half_width(), 0.25 * g.half_width());
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(1.0, 2.0);
  struct Bump {
    std::array<double, 3> c;
    double a, w;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < count; ++b) {
    Bump bump{};
    for (int d = 0; d < g.dim(); ++d) bump.c[d] = centre(rng);
    bump.a = amp(rng);
    bump.w = width * scale(rng);
    bumps.push_back(bump);
  }
  RealField f = RealField::sample(g, [&](std::span<const double> x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) r2 += (x[d] - b.c[d]) * (x[d] - b.c[d]);
      s += b.a * std::exp(-0.5 * r2 / (b.w * b.w));
    }
    return s;
  });
  // Remove the zero mode: the periodic box has no decay mechanism for it.
  SpectralField F = forward(f);
  F.values[0] = 0.0;
  return inverse(F);
}

}  // namespace

InitialData make_data(const DataSpec& spec, const Grid& grid, const SystemParams& params) {
  validate(params);
  if (grid.dim() != params.n) throw InvalidInput("make_data: grid dimension differs from n");
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude))
    throw InvalidInput("make_data: amplitude must be finite and >= 0");
  InitialData d{RealField(grid), RealField(grid), RealField(grid), RealField(grid), 0.0};
  switch (spec.kind) {
    case DataKind::GaussianBump: {
      if (!(spec.width > 0.0)) throw InvalidInput("make_data: width must be positive");
      const double w2 = spec.width * spec.width;
      d.u1 = RealField::sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return spec.amplitude * std::exp(-0.5 * r2 / w2);
      });
      d.v1 = d.u1;
      break;
    }
    case DataKind::SlowDecayProfile: {
      if (!(spec.tail > 0.0)) throw InvalidInput("make_data: tail exponent epsilon must be positive");
      const double e = (params.n + spec.tail) / params.m;
      d.u1 = RealField::sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return spec.amplitude * std::pow(1.0 + std::sqrt(r2), -e);
      });
      d.v1 = d.u1;
      break;
    }
    case DataKind::SmallEnergy: {
      if (spec.bumps < 1) throw InvalidInput("make_data: bumps must be >= 1");
      if (!(spec.width > 0.0)) throw InvalidInput("make_data: width must be positive");
      std::mt19937_64 rng(spec.seed);
      d.u0 = random_bumps(grid, rng, spec.bumps, spec.width);
      d.u1 = random_bumps(grid, rng, spec.bumps, spec.width);
      d.v0 = random_bumps(grid, rng, spec.bumps, spec.width);
      d.v1 = random_bumps(grid, rng, spec.bumps, spec.width);
      const double raw = a_norm(d.u0, d.u1, params.m) + a_norm(d.v0, d.v1, params.m);
      const double s = raw > 0.0 ? spec.amplitude / raw : 0.0;
      for (auto* f : {&d.u0, &d.u1, &d.v0, &d.v1})
        for (double& x : f->values) x *= s;
      break;
    }
  }
  d.a_norm = a_norm(d.u0, d.u1, params.m) + a_norm(d.v0, d.v1, params.m);
  return d;
}

CoupledState initial_state(const InitialData& data, const SystemParams& params) {
  validate(params);
  CoupledState s(data.u0.grid, params);
  s.u = forward(data.u0);
  s.ut = forward(data.u1);
  s.v = forward(data.v0);
  s.vt = forward(data.v1);
  return s;
}

namespace {

StepPlan::Tables build_tables(const Grid& g, double delta, double h) {
  StepPlan::Tables t;
  auto xi = g.frequency_norms();
  t.k0.resize(xi.size());
  t.k1.resize(xi.size());
  t.dk0.resize(xi.size());
  t.dk1.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const KernelValues kv = kernel_values(h, xi[i], delta);
    t.k0[i] = kv.k0.real();
    t.k1[i] = kv.k1.real();
    t.dk0[i] = kv.dk0.real();
    t.dk1[i] = kv.dk1.real();
  }
  return t;
}

bool is_integer(double p) { return p == std::floor(p) && p <= 64.0; }

bool all_finite(const RealField& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double x) { return std::isfinite(x); });
}

// Spectrum of |w|^p, dealiased; w is physical. An overflowing power marks the
// step non-finite when diagnostics are collected.
SpectralField nonlinearity(const RealField& w, double p, StepDiagnostics* diag) {
  RealField f(w.grid);
  abs_power(w.values, p, f.values);
  if (!all_finite(f)) {
    if (!diag) throw NumericalFailure("step: |w|^p overflowed");
    diag->finite = false;
    return SpectralField(w.grid);
  }
  SpectralField F = forward(f);
  truncate_two_thirds(F);
  return F;
}

RealField to_physical(const SpectralField& F, StepDiagnostics* diag) {
  double imag = 0.0;
  RealField f = inverse(F, diag ? &imag : nullptr);
  if (diag) {
    const double scale = sup_norm(f);
    if (scale > 0.0) diag->max_imag = std::max(diag->max_imag, imag / scale);
    if (!all_finite(f)) diag->finite = false;
  }
  return f;
}

}  // namespace

StepPlan::StepPlan(const Grid& grid, const SystemParams& params, double h) : h_(h) {
  validate(params);
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("step: h must be positive and finite");
  u_ = build_tables(grid, params.delta1, h);
  v_ = params.delta2 == params.delta1 ? u_ : build_tables(grid, params.delta2, h);
}

void abs_power(std::span<const double> w, double p, std::span<double> out) {
  if (is_integer(p)) {
    const int k = static_cast<int>(p);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double a = std::abs(w[i]);
      double r = a;
      for (int j = 1; j < k; ++j) r *= a;
      out[i] = r;
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double a = std::abs(w[i]);
      out[i] = a < 1e-300 ? 0.0 : std::exp(p * std::log(a));
    }
  }
}

CoupledState step(const CoupledState& s, const StepPlan& plan, bool nonlinear, StepDiagnostics* diag) {
  const Grid& g = s.grid();
  const std::size_t size = g.size();
  const double h = plan.h();
  const auto& tu = plan.u_tables();
  const auto& tv = plan.v_tables();

  CoupledState out(g, s.params);
  out.t = s.t + h;
  for (std::size_t i = 0; i < size; ++i) {
    out.u.values[i] = tu.k0[i] * s.u.values[i] + tu.k1[i] * s.ut.values[i];
    out.ut.values[i] = tu.dk0[i] * s.u.values[i] + tu.dk1[i] * s.ut.values[i];
    out.v.values[i] = tv.k0[i] * s.v.values[i] + tv.k1[i] * s.vt.values[i];
    out.vt.values[i] = tv.dk0[i] * s.v.values[i] + tv.dk1[i] * s.vt.values[i];
  }
  if (!nonlinear) return out;

  // u is driven by |v|^p, v by |u|^q.
  const SpectralField fu0 = nonlinearity(to_physical(s.v, diag), s.params.p, diag);
  const SpectralField fv0 = nonlinearity(to_physical(s.u, diag), s.params.q, diag);
  if (diag && !diag->finite) return out;

  SpectralField u_pred = out.u;
  SpectralField v_pred = out.v;
  for (std::size_t i = 0; i < size; ++i) {
    u_pred.values[i] += h * tu.k1[i] * fu0.values[i];
    v_pred.values[i] += h * tv.k1[i] * fv0.values[i];
  }
  const SpectralField fu1 = nonlinearity(to_physical(v_pred, diag), s.params.p, diag);
  const SpectralField fv1 = nonlinearity(to_physical(u_pred, diag), s.params.q, diag);
  if (diag && !diag->finite) return out;

  // Trapezoid on the Duhamel integral; the lag-0 kernels are K1 = 0, dK1 = 1.
  const double hh = 0.5 * h;
  for (std::size_t i = 0; i < size; ++i) {
    out.u.values[i] += hh * tu.k1[i] * fu0.values[i];
    out.ut.values[i] += hh * (tu.dk1[i] * fu0.values[i] + fu1.values[i]);
    out.v.values[i] += hh * tv.k1[i] * fv0.values[i];
    out.vt.values[i] += hh * (tv.dk1[i] * fv0.values[i] + fv1.values[i]);
  }
  return out;
}

CoupledState step(const CoupledState& state, double h, bool nonlinear) {
  const StepPlan plan(state.grid(), state.params, h);
  return step(state, plan, nonlinear);
}

const char* norm_name(int i) {
  static const char* names[kNormCount] = {"u_L2",  "grad_u_L2", "ut_L2",  "v_L2",  "grad_v_L2",
                                          "vt_L2", "u_Linf",    "v_Linf", "u_Lm", "v_Lm"};
  return (i >= 0 && i < kNormCount) ? names[i] : "unknown";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "Running";
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowUpDetected: return "BlowUpDetected";
    case RunStatus::Aborted: return "Aborted";
  }
  return "unknown";
}

std::array<double, kNormCount> state_norms(const CoupledState& s, std::array<double, 4>* extrema) {
  std::array<double, kNormCount> n{};
  n[kUL2] = l2_norm(s.u);
  n[kGradU] = sobolev_seminorm(s.u, 1.0);
  n[kUt] = l2_norm(s.ut);
  n[kVL2] = l2_norm(s.v);
  n[kGradV] = sobolev_seminorm(s.v, 1.0);
  n[kVt] = l2_norm(s.vt);
  const RealField u = inverse(s.u);
  const RealField v = inverse(s.v);
  n[kUSup] = sup_norm(u);
  n[kVSup] = sup_norm(v);
  n[kULm] = lp_norm(u, s.params.m);
  n[kVLm] = lp_norm(v, s.params.m);
  if (extrema) {
    auto [umin, umax] = std::minmax_element(u.values.begin(), u.values.end());
    auto [vmin, vmax] = std::minmax_element(v.values.begin(), v.values.end());
    *extrema = {*umax, *umin, *vmax, *vmin};
  }
  return n;
}

std::optional<double> detect_blowup(const TrajectoryRecord& record, double threshold, int window) {
  if (!(threshold > 0.0)) throw InvalidInput("detect_blowup: threshold must be positive");
  const int w = std::max(window, 1);
  std::vector<double> sums;
  for (std::size_t i = 0; i < record.norms.size(); ++i) {
    const double s = record.norms[i][kUSup] + record.norms[i][kVSup];
    sums.push_back(std::isfinite(s) ? s : HUGE_VAL);
    if (!(sums.back() > threshold)) continue;
    if (sums.size() < static_cast<std::size_t>(w)) continue;
    bool increasing = true;
    for (std::size_t k = sums.size() - w + 1; k < sums.size(); ++k)
      if (!(sums[k] > sums[k - 1])) increasing = false;
    if (increasing) return record.times[i];
  }
  return std::nullopt;
}

TrajectoryRecord run(const SystemParams& params, const Grid& grid, const InitialData& data, const RunOptions& opts) {
  validate(params);
  if (!(opts.T >= 0.0) || !std::isfinite(opts.T)) throw InvalidInput("run: T must be finite and >= 0");
  if (!(opts.h > 0.0)) throw InvalidInput("run: h must be positive");
  if (opts.record_every < 1) throw InvalidInput("run: record_every must be >= 1");
  if (!(data.u0.grid == grid)) throw InvalidInput("run: data grid differs from run grid");

  TrajectoryRecord rec;
  CoupledState s = initial_state(data, params);
  auto record = [&](const CoupledState& st) {
    std::array<double, 4> ext{};
    rec.times.push_back(st.t);
    rec.norms.push_back(state_norms(st, &ext));
    rec.extrema.push_back(ext);
    if (st.t > 0.5 * grid.half_width()) rec.wrap_warning = true;
  };
  record(s);

  const long steps = std::lround(std::ceil(opts.T / opts.h - 1e-9));
  if (steps == 0) {
    rec.status = RunStatus::Completed;
    return rec;
  }
  const double h = opts.T / static_cast<double>(steps);
  const StepPlan plan(grid, params, h);
  for (long k = 1; k <= steps; ++k) {
    StepDiagnostics diag;
    s = step(s, plan, opts.nonlinear, &diag);
    s.t = k * h;
    rec.max_imag = std::max(rec.max_imag, diag.max_imag);
    const bool due = k % opts.record_every == 0 || k == steps;
    if (!diag.finite) {
      rec.times.push_back(s.t);
      rec.norms.push_back({});
      rec.norms.back().fill(std::nan(""));
      rec.extrema.push_back({});
      rec.extrema.back().fill(std::nan(""));
      rec.status = RunStatus::Aborted;
      rec.reason = "NumericalOverflow";
      if (auto t = detect_blowup(rec, opts.threshold, opts.window)) {
        rec.status = RunStatus::BlowUpDetected;
        rec.t_star = *t;
      }
      return rec;
    }
    if (due) {
      record(s);
      const auto& last = rec.norms.back();
      if (!std::all_of(last.begin(), last.end(), [](double x) { return std::isfinite(x); })) {
        rec.status = RunStatus::Aborted;
        rec.reason = "NumericalOverflow";
      }
      if (auto t = detect_blowup(rec, opts.threshold, opts.window)) {
        rec.status = RunStatus::BlowUpDetected;
        rec.t_star = *t;
        return rec;
      }
      if (rec.status == RunStatus::Aborted) return rec;
    }
  }
  rec.status = RunStatus::Completed;
  return rec;
}

std::vector<std::array<double, 6>> weighted_norms(const TrajectoryRecord& record, const SystemParams& params,
                                                  bool mirrored) {
  const Weights w = solution_space_weights(params, mirrored ? RateSource::Thm12 : RateSource::Thm11);
  std::vector<std::array<double, 6>> out;
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    const double lt = std::log1p(record.times[i]);
    std::array<double, 6> row{};
    for (int c = 0; c < 3; ++c) {
      row[c] = record.norms[i][c] * std::exp(-w.f[c] * lt);
      row[3 + c] = record.norms[i][3 + c] * std::exp(-w.g[c] * lt);
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace sdw
