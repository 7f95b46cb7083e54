#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plap/coeffs.hpp"

namespace plap {

enum class ExperimentKind {
  kSolve,
  kConvergence,
  kLipschitz,
  kHolder,
  kCascade,
  kSmallness,
  kSliceTransfer,
  kLemmaIdentity,
  kBarrier,
  kEpsSweep,
  kComparison,
};

std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);
const std::vector<ExperimentKind>& all_kinds();

struct GridSettings {
  int n = 1;
  double half_width = 1.0;
  double h = 0.0;
  std::optional<double> dt;  // defaults to the dyadic CFL step
  double t_begin = -1.0;
  double t_end = 0.0;
};

struct CascadeSettings {
  double ell = 0.5;
  double mu = 0.1;
  double tau = 0.125;
  double delta = 0.1;
  double c0 = 1.0;
  double c1 = 1.0;
  int levels = 4;
};

struct SmallnessSettings {
  std::vector<double> eps0{0.1, 0.2};
  std::vector<double> eps1{0.01, 0.05};
  std::vector<double> eta{0.25, 0.5};
  double gamma = 0.5;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSolve;
  PLaplaceParams params;
  GridSettings grid;
  double cfl = 0.9;
  bool monotonicity_check = true;
  int record_stride = 1;

  std::uint64_t seed = 0;
  int smoothness = 2;
  int runs = 1;
  double tilt = 0.0;  // adds tilt * x_0 to the generated boundary data

  CascadeSettings cascade;
  SmallnessSettings smallness;

  std::vector<double> sweep_p;    // empty: solver.p only
  std::vector<double> sweep_eps;  // empty: solver.eps only (eps-sweep has its own default)
  std::vector<double> sweep_h;    // empty: grid.h only

  std::vector<double> convergence_h{0.125, 0.0625, 0.03125};
  std::string convergence_solution = "quadratic";

  std::vector<double> holder_radii{0.5, 0.25, 0.125};
  std::vector<double> holder_lags{0.0625, 0.015625, 0.00390625};

  double comparison_gap = 0.05;
  int barrier_samples = 1000;
  int barrier_points = 10000;
  int identity_points = 100;

  // Every key that was set, in file order, with its literal value.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses line-oriented `key = value` text. `#` starts a comment. Lists are
/// comma-separated; numbers may be written as fractions ("1/32"). When
/// `kind` is given it must agree with an `experiment.kind` key if present.
/// Throws ConfigError on unknown keys (all of them listed), missing required
/// keys, malformed values and range violations.
ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind = std::nullopt);

/// parse_config on the contents of a file.
ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> kind = std::nullopt);

/// The p values an experiment iterates over.
std::vector<double> p_values(const ExperimentConfig& c);

}  // namespace plap
