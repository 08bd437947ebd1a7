#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sdw/cli_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Structurally damped coupled wave lab"};
  app.set_version_flag("--version", sdw::kToolVersion);
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  std::optional<long long> seed;
  std::optional<int> threads;

  for (const char* name : {"kernels", "simulate", "rates", "atlas", "testfn"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed for randomized data");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const long long* seed_ptr = seed ? &*seed : nullptr;
  const int* threads_ptr = threads ? &*threads : nullptr;
  const int code = sdw::run_from_file(config, out, command, seed_ptr, threads_ptr);
  if (code != 0) std::cerr << "sdwlab " << command << ": failed with exit code " << code << ", see " << out
                           << "/run_manifest.json\n";
  return code;
}
