#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdw/params.hpp"
#include "sdw/spectral_core.hpp"

namespace sdw {

/// (u, u_t, v, v_t) in frequency space at time t.
struct CoupledState {
  SpectralField u;
  SpectralField ut;
  SpectralField v;
  SpectralField vt;
  double t = 0.0;
  SystemParams params;

  CoupledState(const Grid& g, const SystemParams& p);
  const Grid& grid() const { return u.grid; }
};

enum class DataKind { GaussianBump, SlowDecayProfile, SmallEnergy };

const char* to_string(DataKind k);
DataKind parse_data_kind(const std::string& name);

struct DataSpec {
  DataKind kind = DataKind::GaussianBump;
  double amplitude = 1.0;  ///< peak for the bump/profile, target A-norm for SmallEnergy
  double width = 1.0;      ///< Gaussian width of the bump (and of SmallEnergy bumps)
  double tail = 0.2;       ///< the positive epsilon in the (1+|x|)^{-(n+eps)/m} profile
  std::uint64_t seed = 0;  ///< SmallEnergy only
  int bumps = 4;           ///< SmallEnergy only
};

struct InitialData {
  RealField u0;
  RealField u1;
  RealField v0;
  RealField v1;
  /// Discrete ||(u0,u1)||_A + ||(v0,v1)||_A.
  double a_norm = 0.0;
};

/// ||(f0,f1)||_A = ||f0||_{L^m} + ||f0||_{H^1} + ||f1||_{L^m} + ||f1||_{L^2} on the grid.
double a_norm(const RealField& f0, const RealField& f1, double m);

/// GaussianBump: u1 = v1 = amplitude exp(-|x|^2/(2 width^2)), u0 = v0 = 0.
/// SlowDecayProfile: u1 = v1 = amplitude (1+|x|)^{-(n+tail)/m}, u0 = v0 = 0.
/// SmallEnergy: seeded sums of smooth bumps in all four slots with the zero
/// Fourier mode removed, scaled so that the reported A-norm equals amplitude.
InitialData make_data(const DataSpec& spec, const Grid& grid, const SystemParams& params);

CoupledState initial_state(const InitialData& data, const SystemParams& params);

/// Kernel tables for one step length, reusable across steps.
class StepPlan {
 public:
  StepPlan(const Grid& grid, const SystemParams& params, double h);

  double h() const { return h_; }

  struct Tables {
    std::vector<double> k0, k1, dk0, dk1;
  };
  const Tables& u_tables() const { return u_; }
  const Tables& v_tables() const { return v_; }

 private:
  double h_;
  Tables u_;
  Tables v_;
};

struct StepDiagnostics {
  double max_imag = 0.0;  ///< largest imaginary residue relative to the field's sup
  bool finite = true;
};

/// One exponential-trapezoid step of length plan.h(). With nonlinear = false
/// the step is the exact linear evolution.
CoupledState step(const CoupledState& state, const StepPlan& plan, bool nonlinear = true,
                  StepDiagnostics* diag = nullptr);
CoupledState step(const CoupledState& state, double h, bool nonlinear = true);

/// |w|^p pointwise; integer p by repeated multiplication, otherwise exp(p log|w|)
/// with |w| < 1e-300 flushed to 0.
void abs_power(std::span<const double> w, double p, std::span<double> out);

enum Norm : int {
  kUL2,
  kGradU,
  kUt,
  kVL2,
  kGradV,
  kVt,
  kUSup,
  kVSup,
  kULm,
  kVLm,
  kNormCount
};

const char* norm_name(int i);

enum class RunStatus { Running, Completed, BlowUpDetected, Aborted };

const char* to_string(RunStatus s);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::array<double, kNormCount>> norms;
  /// max u, min u, max v, min v per recorded time.
  std::vector<std::array<double, 4>> extrema;
  RunStatus status = RunStatus::Running;
  double t_star = 0.0;        ///< BlowUpDetected time
  std::string reason;         ///< Aborted reason
  bool wrap_warning = false;  ///< some recorded t exceeded half the box width
  double max_imag = 0.0;      ///< largest relative imaginary residue seen
};

struct RunOptions {
  double T = 1.0;
  double h = 0.01;
  int record_every = 1;
  double threshold = 1e8;
  int window = 5;
  bool nonlinear = true;
};

/// Norms of a state, in Norm order, and its signed extrema.
std::array<double, kNormCount> state_norms(const CoupledState& s, std::array<double, 4>* extrema = nullptr);

TrajectoryRecord run(const SystemParams& params, const Grid& grid, const InitialData& data, const RunOptions& opts);

/// First recorded time where ||u||_inf + ||v||_inf exceeds threshold (or is not
/// finite) and the last `window` sums up to it increase strictly.
std::optional<double> detect_blowup(const TrajectoryRecord& record, double threshold = 1e8, int window = 5);

/// ||.|| (1+t)^{-exponent} for the six energy norms with the solution-space
/// weights of the given theorem (Thm11 or Thm12); rows follow record.times.
std::vector<std::array<double, 6>> weighted_norms(const TrajectoryRecord& record, const SystemParams& params,
                                                  bool mirrored);

}  // namespace sdw
