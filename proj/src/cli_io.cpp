#include "sdw/cli_io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdw/errors.hpp"
#include "sdw/exponent_atlas.hpp"
#include "sdw/linear_kernels.hpp"
#include "sdw/rate_lab.hpp"
#include "sdw/testfn_lab.hpp"

namespace sdw {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- strict JSON reading

class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    std::string p = path_;
    if (!key.empty()) p = p.empty() ? key : p + "." + key;
    throw InvalidInput((p.empty() ? std::string("config") : p) + ": " + why);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) { return j_.at(key); }
  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(key, "must be finite");
  }

  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < -1000000000LL || x > 1000000000LL) fail(key, "integer out of range");
    out = static_cast<int>(x);
  }

  void uinteger(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      fail(key, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  // A number or a rational string such as "1/2".
  void rational(const std::string& key, Rational& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (v.is_number()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) fail(key, "must be finite");
      out = Rational(d);
    } else if (v.is_string()) {
      try {
        out = parse_rational(v.get<std::string>());
      } catch (const InvalidInput& e) {
        fail(key, e.what());
      }
    } else {
      fail(key, "expected a number or a rational string");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) fail(key, "must be finite");
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::set<std::string> kCommands{"kernels", "simulate", "rates", "atlas", "testfn"};

void check_domains(const RunConfig& c) {
  auto bad = [](const std::string& path, const std::string& why) { throw InvalidInput(path + ": " + why); };
  if (!c.command.empty() && !kCommands.count(c.command))
    bad("command", "must be one of kernels, simulate, rates, atlas, testfn");
  if (c.threads < 1 || c.threads > 256) bad("threads", "must lie in [1, 256]");
  try {
    validate(c.params);
  } catch (const InvalidInput& e) {
    std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find(' '));
    bad("params." + field, msg);
  }
  if (c.grid.points < 8 || c.grid.points % 2 != 0 || c.grid.points > 4096) bad("grid.points", "must be even, in [8, 4096]");
  if (!(c.grid.half_width > 0.0)) bad("grid.half_width", "must be positive");
  if (!(c.data.amplitude >= 0.0)) bad("data.amplitude", "must be >= 0");
  if (!(c.data.width > 0.0)) bad("data.width", "must be positive");
  if (c.data.kind == DataKind::SlowDecayProfile && !(c.data.tail > 0.0))
    bad("data.tail", "must be positive (the decay profile needs a positive epsilon)");
  if (c.data.bumps < 1 || c.data.bumps > 64) bad("data.bumps", "must lie in [1, 64]");
  if (!(c.time.T >= 0.0)) bad("time.T", "must be >= 0");
  if (!(c.time.h_max > 0.0)) bad("time.h_max", "must be positive");
  if (!(c.time.h > 0.0 && c.time.h <= c.time.h_max)) bad("time.h", "must lie in (0, h_max]");
  if (c.time.record_every < 1) bad("time.record_every", "must be >= 1");
  if (!(c.time.threshold > 0.0)) bad("time.threshold", "must be positive");
  if (c.time.window < 1) bad("time.window", "must be >= 1");
  if (!(c.sweep.p_min >= 1.0 && c.sweep.p_max > c.sweep.p_min)) bad("sweep.p_max", "need 1 <= p_min < p_max");
  if (!(c.sweep.q_min >= 1.0 && c.sweep.q_max > c.sweep.q_min)) bad("sweep.q_max", "need 1 <= q_min < q_max");
  if (c.sweep.resolution_p < 1 || c.sweep.resolution_p > 2000) bad("sweep.resolution_p", "must lie in [1, 2000]");
  if (c.sweep.resolution_q < 1 || c.sweep.resolution_q > 2000) bad("sweep.resolution_q", "must lie in [1, 2000]");
  if (!(c.kernels.delta >= 0.0 && c.kernels.delta <= 0.5)) bad("kernels.delta", "delta must lie in [0, 0.5]");
  for (double t : c.kernels.times)
    if (!(t >= 0.0)) bad("kernels.times", "entries must be >= 0");
  for (double x : c.kernels.frequencies)
    if (!(x >= 0.0)) bad("kernels.frequencies", "entries must be >= 0");
  if (c.rates.j < 0 || c.rates.j > 1) bad("rates.j", "must be 0 or 1");
  if (c.rates.k < 0 || c.rates.k > 1) bad("rates.k", "must be 0 or 1");
  if (!(c.rates.t_min > 0.0 && c.rates.t_max > c.rates.t_min)) bad("rates.t_max", "need 0 < t_min < t_max");
  if (c.rates.samples < 8 || c.rates.samples > 10000) bad("rates.samples", "must lie in [8, 10000]");
  if (!(c.testfn.r > 0.0)) bad("testfn.r", "must be positive");
  if (!(c.testfn.s > 0.0 && c.testfn.s < 1.0)) bad("testfn.s", "must lie in (0, 1)");
  if (!(c.testfn.radius_max > 1.0)) bad("testfn.radius_max", "must exceed 1");
  if (c.testfn.points < 8 || c.testfn.points > 400) bad("testfn.points", "must lie in [8, 400]");
  if (!(c.testfn.R > 0.0)) bad("testfn.R", "must be positive");
  if (!(c.testfn.kappa > 0.0)) bad("testfn.kappa", "must be positive");
  if (c.params.n > 2 && c.command == "testfn") bad("params.n", "testfn supports n in {1, 2}");
  if (c.params.n > 3 && c.command == "simulate") bad("params.n", "simulate supports n in {1, 2, 3}");
}

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: malformed JSON: ") + e.what());
  }
  RunConfig c;
  Obj root(j, "");
  root.text("command", c.command);
  root.uinteger("seed", c.seed);
  root.integer("threads", c.threads);
  if (root.has("params")) {
    Obj o(root.at("params"), "params");
    o.integer("n", c.params.n);
    o.rational("m", c.params.m);
    o.rational("delta1", c.params.delta1);
    o.rational("delta2", c.params.delta2);
    o.rational("p", c.params.p);
    o.rational("q", c.params.q);
    o.finish();
  }
  if (root.has("grid")) {
    Obj o(root.at("grid"), "grid");
    o.integer("points", c.grid.points);
    o.number("half_width", c.grid.half_width);
    o.finish();
  }
  if (root.has("data")) {
    Obj o(root.at("data"), "data");
    std::string kind = to_string(c.data.kind);
    o.text("kind", kind);
    try {
      c.data.kind = parse_data_kind(kind);
    } catch (const InvalidInput&) {
      o.fail("kind", "must be GaussianBump, SlowDecayProfile or SmallEnergy");
    }
    o.number("amplitude", c.data.amplitude);
    o.number("width", c.data.width);
    o.number("tail", c.data.tail);
    o.integer("bumps", c.data.bumps);
    o.finish();
  }
  if (root.has("time")) {
    Obj o(root.at("time"), "time");
    o.number("T", c.time.T);
    o.number("h", c.time.h);
    o.number("h_max", c.time.h_max);
    o.integer("record_every", c.time.record_every);
    o.number("threshold", c.time.threshold);
    o.integer("window", c.time.window);
    o.finish();
  }
  if (root.has("sweep")) {
    Obj o(root.at("sweep"), "sweep");
    o.number("p_min", c.sweep.p_min);
    o.number("p_max", c.sweep.p_max);
    o.number("q_min", c.sweep.q_min);
    o.number("q_max", c.sweep.q_max);
    o.integer("resolution_p", c.sweep.resolution_p);
    o.integer("resolution_q", c.sweep.resolution_q);
    o.finish();
  }
  if (root.has("kernels")) {
    Obj o(root.at("kernels"), "kernels");
    o.number("delta", c.kernels.delta);
    o.numbers("times", c.kernels.times);
    o.numbers("frequencies", c.kernels.frequencies);
    o.finish();
  }
  if (root.has("rates")) {
    Obj o(root.at("rates"), "rates");
    o.integer("j", c.rates.j);
    o.integer("k", c.rates.k);
    o.number("t_min", c.rates.t_min);
    o.number("t_max", c.rates.t_max);
    o.integer("samples", c.rates.samples);
    o.finish();
  }
  if (root.has("testfn")) {
    Obj o(root.at("testfn"), "testfn");
    o.number("r", c.testfn.r);
    o.number("s", c.testfn.s);
    o.number("radius_max", c.testfn.radius_max);
    o.integer("points", c.testfn.points);
    o.number("R", c.testfn.R);
    o.number("kappa", c.testfn.kappa);
    o.numbers("scaling_points", c.testfn.scaling_points);
    o.finish();
  }
  root.finish();
  check_domains(c);
  c.data.seed = c.seed;
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["params"] = {{"n", c.params.n},
                 {"m", rational_text(c.params.m)},
                 {"delta1", rational_text(c.params.delta1)},
                 {"delta2", rational_text(c.params.delta2)},
                 {"p", rational_text(c.params.p)},
                 {"q", rational_text(c.params.q)}};
  j["grid"] = {{"points", c.grid.points}, {"half_width", c.grid.half_width}};
  j["data"] = {{"kind", to_string(c.data.kind)},
               {"amplitude", c.data.amplitude},
               {"width", c.data.width},
               {"tail", c.data.tail},
               {"bumps", c.data.bumps}};
  j["time"] = {{"T", c.time.T},
               {"h", c.time.h},
               {"h_max", c.time.h_max},
               {"record_every", c.time.record_every},
               {"threshold", c.time.threshold},
               {"window", c.time.window}};
  j["sweep"] = {{"p_min", c.sweep.p_min},           {"p_max", c.sweep.p_max},
                {"q_min", c.sweep.q_min},           {"q_max", c.sweep.q_max},
                {"resolution_p", c.sweep.resolution_p}, {"resolution_q", c.sweep.resolution_q}};
  j["kernels"] = {{"delta", c.kernels.delta}, {"times", c.kernels.times}, {"frequencies", c.kernels.frequencies}};
  j["rates"] = {{"j", c.rates.j},
                {"k", c.rates.k},
                {"t_min", c.rates.t_min},
                {"t_max", c.rates.t_max},
                {"samples", c.rates.samples}};
  j["testfn"] = {{"r", c.testfn.r},
                 {"s", c.testfn.s},
                 {"radius_max", c.testfn.radius_max},
                 {"points", c.testfn.points},
                 {"R", c.testfn.R},
                 {"kappa", c.testfn.kappa},
                 {"scaling_points", c.testfn.scaling_points}};
  return j.dump(2);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string run_id(const RunConfig& cfg) { return sha256_hex(serialize_config(cfg)).substr(0, 16); }

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Accumulates CSV text; rows end with the run id column.
class Csv {
 public:
  Csv(std::string name, const std::vector<std::string>& header, std::string id)
      : name_(std::move(name)), id_(std::move(id)) {
    for (const auto& h : header) os_ << h << ',';
    os_ << "run_id\n";
  }
  Csv& operator<<(double x) {
    os_ << format_double(x) << ',';
    return *this;
  }
  Csv& operator<<(int x) {
    os_ << x << ',';
    return *this;
  }
  Csv& operator<<(const std::string& s) {
    os_ << s << ',';
    return *this;
  }
  Csv& operator<<(const char* s) { return *this << std::string(s); }
  void end_row() { os_ << id_ << '\n'; }
  const std::string& name() const { return name_; }
  std::string text() const { return os_.str(); }

 private:
  std::string name_;
  std::string id_;
  std::ostringstream os_;
};

struct Outputs {
  std::filesystem::path dir;
  json files = json::array();
  json warnings = json::array();

  void write(const Csv& csv) { write_text(csv.name(), csv.text()); }
  void write_text(const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    files.push_back({{"file", name}, {"sha256", sha256_hex(text)}, {"bytes", text.size()}});
  }
};

// RK4 reference for w'' + |xi|^{2 delta} w' + |xi|^2 w = 0, refined until two
// successive step counts agree.
std::array<double, 4> ode_reference(double t, double xi, double delta) {
  const double a = std::pow(xi, 2.0 * delta);
  const double b = xi * xi;
  auto solve = [&](double w, double wt, long steps) {
    const double h = t / steps;
    for (long i = 0; i < steps; ++i) {
      auto f = [&](double y, double yt) { return std::pair{yt, -a * yt - b * y}; };
      auto [k1a, k1b] = f(w, wt);
      auto [k2a, k2b] = f(w + 0.5 * h * k1a, wt + 0.5 * h * k1b);
      auto [k3a, k3b] = f(w + 0.5 * h * k2a, wt + 0.5 * h * k2b);
      auto [k4a, k4b] = f(w + h * k3a, wt + h * k3b);
      w += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
      wt += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    }
    return std::array<double, 2>{w, wt};
  };
  if (t == 0.0) return {1.0, 0.0, 0.0, 1.0};
  const double stiff = std::max({a, xi, 1.0}) * t;
  long steps = std::max(64L, static_cast<long>(std::ceil(4.0 * stiff)));
  std::array<double, 4> prev{};
  for (int it = 0; it < 12; ++it, steps *= 2) {
    const auto c0 = solve(1.0, 0.0, steps);
    const auto c1 = solve(0.0, 1.0, steps);
    const std::array<double, 4> cur{c0[0], c1[0], c0[1], c1[1]};
    if (it > 0) {
      double diff = 0.0;
      for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]) / std::max(std::abs(cur[i]), 1e-300));
      if (diff < 1e-11) return cur;
    }
    prev = cur;
  }
  return prev;
}

void run_kernels(const RunConfig& c, const std::string& id, Outputs& out) {
  Csv csv("kernels.csv", {"t", "xi", "delta", "branch", "k0", "k1", "dk0", "dk1", "max_rel_oracle_delta"}, id);
  for (double t : c.kernels.times)
    for (double xi : c.kernels.frequencies) {
      const KernelValues kv = kernel_values(t, xi, c.kernels.delta);
      const auto ref = ode_reference(t, xi, c.kernels.delta);
      const std::array<double, 4> got{kv.k0.real(), kv.k1.real(), kv.dk0.real(), kv.dk1.real()};
      double worst = 0.0;
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst, std::abs(got[i] - ref[i]) / std::max(std::abs(ref[i]), 1e-12));
      csv << t << xi << c.kernels.delta << to_string(kv.branch) << got[0] << got[1] << got[2] << got[3] << worst;
      csv.end_row();
    }
  out.write(csv);
}

void run_simulate(const RunConfig& c, const std::string& id, Outputs& out, json& summary) {
  const SystemParams p = to_double(c.params);
  const Grid g(p.n, c.grid.points, c.grid.half_width);
  DataSpec spec = c.data;
  spec.seed = c.seed;
  const InitialData data = make_data(spec, g, p);
  RunOptions opt;
  opt.T = c.time.T;
  opt.h = c.time.h;
  opt.record_every = c.time.record_every;
  opt.threshold = c.time.threshold;
  opt.window = c.time.window;
  const TrajectoryRecord rec = run(p, g, data, opt);

  std::vector<std::string> header{"t"};
  for (int i = 0; i < kNormCount; ++i) header.push_back(norm_name(i));
  for (const char* h : {"u_max", "u_min", "v_max", "v_min"}) header.push_back(h);
  Csv csv("trajectory.csv", header, id);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    csv << rec.times[i];
    for (double v : rec.norms[i]) csv << v;
    for (double v : rec.extrema[i]) csv << v;
    csv.end_row();
  }
  out.write(csv);

  Csv st("status.csv", {"status", "t_star", "reason", "wrap_warning", "a_norm", "max_imag"}, id);
  st << to_string(rec.status) << rec.t_star << rec.reason << (rec.wrap_warning ? 1 : 0) << data.a_norm << rec.max_imag;
  st.end_row();
  out.write(st);
  if (rec.wrap_warning) out.warnings.push_back("wrap-around: recorded times exceed half the box width");
  summary["status"] = to_string(rec.status);
  if (rec.status == RunStatus::BlowUpDetected) summary["t_star"] = rec.t_star;
  if (rec.status == RunStatus::Aborted) summary["reason"] = rec.reason;
}

void run_rates(const RunConfig& c, const std::string& id, Outputs& out) {
  const SystemParams p = to_double(c.params);
  const double delta = p.delta1;
  const auto pred = predicted_exponents<double>(p.n, p.m, delta, c.rates.j, c.rates.k, RateSource::Cor21);
  std::vector<double> times;
  for (int i = 0; i < c.rates.samples; ++i)
    times.push_back(c.rates.t_min * std::pow(c.rates.t_max / c.rates.t_min, static_cast<double>(i) / (c.rates.samples - 1)));

  Csv series("rates_series.csv", {"driver", "t", "norm"}, id);
  Csv table("rates.csv",
            {"n", "m", "delta", "j", "k", "driver", "predicted", "fitted_slope", "stderr_slope", "samples",
             "prediction_valid", "within_tolerance"},
            id);
  auto gauss = [](double r) { return std::exp(-0.5 * r * r); };
  for (int driver = 0; driver < 2; ++driver) {
    RadialData d;
    (driver == 0 ? d.w0 : d.w1) = gauss;
    std::vector<double> vals;
    for (double t : times) {
      vals.push_back(radial_norm(t, delta, d, p.n, c.rates.j, c.rates.k));
      series << (driver == 0 ? "w0" : "w1") << t << vals.back();
      series.end_row();
    }
    const RateFit fit = fit_rate(times, vals, c.rates.t_min, c.rates.t_max);
    const double predicted = driver == 0 ? pred.exponent_w0 : pred.exponent_w1;
    const bool ok = fit.slope <= predicted + 0.05 && fit.slope >= predicted - 0.1;
    table << p.n << p.m << delta << c.rates.j << c.rates.k << (driver == 0 ? "w0" : "w1") << predicted << fit.slope
          << fit.stderr_slope << static_cast<int>(fit.samples) << (pred.valid() ? 1 : 0) << (ok ? 1 : 0);
    table.end_row();
  }
  out.write(table);
  out.write(series);
}

void run_atlas(const RunConfig& c, const std::string& id, Outputs& out) {
  const SystemParams p = to_double(c.params);
  const auto cells = sweep(p, c.sweep.p_min, c.sweep.p_max, c.sweep.q_min, c.sweep.q_max, c.sweep.resolution_p,
                           c.sweep.resolution_q, c.threads);
  Csv csv("atlas.csv", {"p", "q", "verdict", "margin_17", "margin_18", "margin_114"}, id);
  for (const auto& cell : cells) {
    csv << cell.p << cell.q << cell.verdict.label() << cell.margin_17 << cell.margin_18 << cell.margin_114;
    csv.end_row();
  }
  out.write(csv);
}

void run_testfn(const RunConfig& c, const std::string& id, Outputs& out) {
  const int n = c.params.n;
  const auto& t = c.testfn;
  const Lemma21Report rep = lemma21_check(t.r, t.s, n, t.radius_max, t.points);
  Csv radii("lemma21.csv", {"branch", "radius", "ratio"}, id);
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    radii << rep.branch << rep.radii[i] << rep.ratios[i];
    radii.end_row();
  }
  out.write(radii);

  Csv summary("testfn_summary.csv", {"check", "value", "pass"}, id);
  summary << "lemma21_max_ratio" << rep.max_ratio << (std::isfinite(rep.max_ratio) ? 1 : 0);
  summary.end_row();
  summary << "lemma21_last_decade_slope" << rep.last_decade_slope << (rep.pass ? 1 : 0);
  summary.end_row();

  const BracketWeight psi(t.r);
  SpatialFunction f = [&](std::span<const double> y) { return psi(y); };
  const double dev = lemma22_scaling_check(f, t.R, t.kappa, t.s, n, t.scaling_points);
  summary << "lemma22_max_deviation" << dev << (dev <= 1e-5 ? 1 : 0);
  summary.end_row();

  const SystemParams p = to_double(c.params);
  for (double kappa : {p.p, p.q}) {
    const TemporalCutoff cut = cutoff_build(kappa);
    summary << ("cutoff_bound_kappa_" + format_double(kappa)) << cut.bound() << (std::isfinite(cut.bound()) ? 1 : 0);
    summary.end_row();
  }
  const ExactScalings sc = blowup_scalings(c.params);
  summary << "alpha" << to_double(sc.alpha) << 1;
  summary.end_row();
  summary << "beta" << to_double(sc.beta) << 1;
  summary.end_row();
  summary << "gamma1" << to_double(sc.gamma1) << 1;
  summary.end_row();
  summary << "gamma2" << to_double(sc.gamma2) << 1;
  summary.end_row();
  summary << "comparison_chain" << (sc.chain_holds() ? 1.0 : 0.0) << (sc.chain_holds() ? 1 : 0);
  summary.end_row();
  const double delta0 = std::min(p.delta1, p.delta2);
  if (delta0 > 0.0) {
    const CriticalConstants cc = critical_constants(p, delta0);
    summary << "bracket_integral" << cc.bracket_integral << 1;
    summary.end_row();
    summary << "D_p" << cc.D_p << 1;
    summary.end_row();
    summary << "D_q" << cc.D_q << 1;
    summary.end_row();
  } else {
    out.warnings.push_back("critical constants skipped: delta0 = 0");
  }
  out.write(summary);
}

}  // namespace

int run_command(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Outputs out{out_dir};
  json manifest;
  manifest["tool"] = "sdwlab";
  manifest["version"] = kToolVersion;
  manifest["started"] = timestamp();
  manifest["config"] = json::parse(serialize_config(cfg));
  const std::string id = run_id(cfg);
  manifest["run_id"] = id;
  json summary = json::object();
  int code = 0;
  try {
    check_domains(cfg);
    if (cfg.command == "kernels") run_kernels(cfg, id, out);
    else if (cfg.command == "simulate") run_simulate(cfg, id, out, summary);
    else if (cfg.command == "rates") run_rates(cfg, id, out);
    else if (cfg.command == "atlas") run_atlas(cfg, id, out);
    else if (cfg.command == "testfn") run_testfn(cfg, id, out);
    else throw InvalidInput("command: missing or unknown subcommand");
  } catch (const InvalidInput& e) {
    code = 2;
    manifest["error"] = e.what();
  } catch (const NumericalFailure& e) {
    code = 3;
    manifest["error"] = e.what();
    manifest["achieved_error"] = e.achieved_error();
  }
  manifest["summary"] = summary;
  manifest["outputs"] = out.files;
  manifest["warnings"] = out.warnings;
  manifest["exit_code"] = code;
  manifest["finished"] = timestamp();
  std::ofstream f(out_dir / "run_manifest.json");
  f << manifest.dump(2) << '\n';
  return code;
}

int run_from_file(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                  const std::string& command_override, const long long* seed_override, const int* threads_override) {
  std::string text;
  {
    std::ifstream in(config);
    if (!in) {
      std::filesystem::create_directories(out_dir);
      std::ofstream f(out_dir / "run_manifest.json");
      f << json{{"tool", "sdwlab"}, {"version", kToolVersion}, {"error", "cannot read config " + config.string()},
                {"exit_code", 2}, {"outputs", json::array()}}
               .dump(2)
        << '\n';
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  RunConfig cfg;
  try {
    cfg = parse_config(text);
    if (!command_override.empty()) {
      if (!cfg.command.empty() && cfg.command != command_override)
        throw InvalidInput("command: config says '" + cfg.command + "' but '" + command_override + "' was requested");
      cfg.command = command_override;
    }
    if (seed_override) {
      if (*seed_override < 0) throw InvalidInput("seed: must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(*seed_override);
    }
    if (threads_override) cfg.threads = *threads_override;
    check_domains(cfg);
  } catch (const InvalidInput& e) {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir / "run_manifest.json");
    f << json{{"tool", "sdwlab"}, {"version", kToolVersion}, {"error", e.what()}, {"exit_code", 2},
              {"outputs", json::array()}}
             .dump(2)
      << '\n';
    return 2;
  }
  return run_command(cfg, out_dir);
}

}  // namespace sdw
