#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdw/coupled_solver.hpp"
#include "sdw/params.hpp"

namespace sdw {

inline constexpr const char* kToolVersion = "0.1.0";

struct GridSpec {
  int points = 64;
  double half_width = 16.0;
};

struct TimeSpec {
  double T = 1.0;
  double h = 0.01;
  double h_max = 0.1;
  int record_every = 1;
  double threshold = 1e8;
  int window = 5;
};

struct SweepSpec {
  double p_min = 1.0;
  double p_max = 5.0;
  double q_min = 1.0;
  double q_max = 5.0;
  int resolution_p = 100;
  int resolution_q = 100;
};

struct KernelSpec {
  double delta = 0.25;
  std::vector<double> times{0.5, 1.0, 4.0};
  std::vector<double> frequencies{0.1, 0.5, 1.0, 2.0, 8.0};
};

struct RateSpec {
  int j = 0;
  int k = 0;
  double t_min = 100.0;
  double t_max = 1e4;
  int samples = 41;
};

struct TestfnSpec {
  double r = 3.0;
  double s = 0.25;
  double radius_max = 50.0;
  int points = 24;
  double R = 4.0;
  double kappa = 1.0;
  std::vector<double> scaling_points{0.0, 1.0, 5.0};
};

/// Parsed configuration. Params are kept exact so that "1/2" survives a round trip.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  int threads = 1;
  ExactParams params;
  GridSpec grid;
  DataSpec data;
  TimeSpec time;
  SweepSpec sweep;
  KernelSpec kernels;
  RateSpec rates;
  TestfnSpec testfn;

  bool operator==(const RunConfig& o) const;
};

/// Strict JSON parsing: unknown keys, wrong types and out-of-domain values throw
/// InvalidInput with the offending field path ("params.delta1: ...").
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// 17 significant digits, shortest exponent form ("%.17g").
std::string format_double(double x);

/// First 16 hex digits of the digest of the serialized config: the run id.
std::string run_id(const RunConfig& cfg);

/// Runs the configured subcommand, writing CSVs and run_manifest.json (always
/// last, also on failure) into out_dir. Returns 0, 2 (validation) or 3 (numerical).
int run_command(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Reads and parses the config, applies the seed/threads overrides when given,
/// and calls run_command. Parse errors still leave a manifest.
int run_from_file(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                  const std::string& command_override, const long long* seed_override, const int* threads_override);

}  // namespace sdw
