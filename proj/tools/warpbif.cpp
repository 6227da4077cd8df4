#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "warpbif/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Warped-product spectra and Yamabe bifurcation certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  warpbif::CliRequest request;
  double delta = 0.0, eps = 0.0;
  int grid = 0, threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", request.config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", request.out_dir, "directory for report files");
  auto* delta_opt = app.add_option("--delta", delta, "degeneracy tolerance");
  auto* eps_opt = app.add_option("--eps", eps, "bracket width");
  auto* grid_opt = app.add_option("--grid", grid, "scan grid points");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads");
  auto* seed_opt = app.add_option("--seed", seed, "family-scan sampling seed");
  (void)out_opt;

  for (const char* name : {"torus-spectrum", "weight", "warped-spectrum", "check-hypothesis", "scan",
                           "family-scan"}) {
    app.add_subcommand(name)->callback([&request, name] { request.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : warpbif::kExitConfigError;
  }
  if (*delta_opt) request.overrides.delta = delta;
  if (*eps_opt) request.overrides.eps = eps;
  if (*grid_opt) request.overrides.grid = grid;
  if (*threads_opt) request.overrides.threads = threads;
  if (*seed_opt) request.overrides.seed = seed;
  return warpbif::run(request, std::cout, std::cerr);
}
