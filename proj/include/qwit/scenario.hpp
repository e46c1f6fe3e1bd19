#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwit/dynamics.hpp"
#include "qwit/events.hpp"
#include "qwit/witnesses.hpp"

namespace qwit {

struct ScenarioConfig {
  ModelConfig model;
  std::vector<WitnessId> witnesses;
  double t_max = 0.0;
  int n_samples = 201;
  std::vector<Path> paths{Path::analytic, Path::lindblad};
  McwfConfig mcwf;
  std::string out = "out";

  void validate() const;
  std::vector<double> times() const { return uniform_grid(t_max, n_samples); }
};

/// Flat "key = value" text with '#' comments. Recognised keys: model, gamma1,
/// gamma2, nbar1, nbar2, kappa, p, alpha0_re, alpha0_im, phi0, phi, s0, d0,
/// witnesses, t_max, n_samples, paths, n_traj, seed, dt, out, dim.
/// When phi0 is given, alpha0 = |alpha0| exp(i phi0).
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
};

void apply(ScenarioConfig& cfg, const Overrides& o);

/// Witness values of one path on the grid, [sample][witness].
struct PathRun {
  Path path = Path::analytic;
  std::vector<std::vector<WitnessValue>> values;
  std::function<RawFunction(WitnessId)> refine;
  std::optional<Trajectory> trajectory;
  std::optional<McwfResult> mcwf;
};

PathRun run_path(const ScenarioConfig& cfg, Path path);

std::vector<WitnessSample> samples_of(const ScenarioConfig& cfg, const PathRun& run);

/// Largest |analytic - numeric| truncated value per sample and witness.
std::vector<std::vector<double>> compare_paths(const PathRun& analytic, const PathRun& numeric);

/// Writes witnesses.csv, events.csv, compare.csv (when an analytic path and a
/// numeric path are present) and plot.gp into cfg.out. Returns 0, or 2 when a
/// deterministic path departs from the closed form by more than 1e-6.
int run_scenario(const ScenarioConfig& cfg, std::ostream& log);

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double tolerance = 0.0;
  std::string note;
};

std::vector<CheckResult> verify_checks(const ScenarioConfig& cfg);

/// Prints a pass/fail table; returns 0 when every check passes, 2 otherwise.
int verify(const ScenarioConfig& cfg, std::ostream& out);

/// Prints the closed-form SV/SR table.
int sv_times(const ScenarioConfig& cfg, std::ostream& out);

/// printf("%.17g").
std::string format_number(double x);

}  // namespace qwit
