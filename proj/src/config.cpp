#include "plap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "plap/error.hpp"
#include "plap/grid.hpp"

namespace plap {
namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::kSolve, "solve"},
    {ExperimentKind::kConvergence, "convergence"},
    {ExperimentKind::kLipschitz, "lipschitz"},
    {ExperimentKind::kHolder, "holder"},
    {ExperimentKind::kCascade, "cascade"},
    {ExperimentKind::kSmallness, "smallness"},
    {ExperimentKind::kSliceTransfer, "slice-transfer"},
    {ExperimentKind::kLemmaIdentity, "lemma-identity"},
    {ExperimentKind::kBarrier, "barrier"},
    {ExperimentKind::kEpsSweep, "eps-sweep"},
    {ExperimentKind::kComparison, "comparison"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  auto plain = [&](std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
  };
  double v = 0.0;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    double num = 0.0, den = 0.0;
    if (plain(text.substr(0, slash), num) && plain(text.substr(slash + 1), den) && den != 0.0) return num / den;
  } else if (plain(text, v)) {
    return v;
  }
  throw ConfigError("type mismatch for " + std::string(key) + ": expected a number, got '" + std::string(text) + "'");
}

long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("type mismatch for " + std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw ConfigError("type mismatch for " + std::string(key) + ": expected an unsigned 64-bit integer, got '" +
                      std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("type mismatch for " + std::string(key) + ": expected true or false, got '" + std::string(text) +
                    "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_number(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_positive_list(const std::vector<double>& v, const std::string& key) {
  require(!v.empty(), key + " must not be empty");
  for (const double x : v) require(x > 0.0 && std::isfinite(x), key + " entries must be positive");
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> v;
    for (const auto& [k, name] : kKindNames) v.push_back(k);
    return v;
  }();
  return kinds;
}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind) {
  ExperimentConfig c;
  std::optional<ExperimentKind> file_kind;
  double p = 0.0, eps = 0.0;
  long n = 0;

  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"experiment.kind",
       [&](auto k, auto v) {
         file_kind = parse_kind(trim(v));
         if (!file_kind) throw ConfigError("unknown value for " + std::string(k) + ": '" + std::string(trim(v)) + "'");
       }},
      {"solver.p", [&](auto k, auto v) { p = parse_number(k, v); }},
      {"solver.eps", [&](auto k, auto v) { eps = parse_number(k, v); }},
      {"solver.cfl", [&](auto k, auto v) { c.cfl = parse_number(k, v); }},
      {"solver.monotonicity_check", [&](auto k, auto v) { c.monotonicity_check = parse_bool(k, v); }},
      {"solver.record_stride", [&](auto k, auto v) { c.record_stride = static_cast<int>(parse_integer(k, v)); }},
      {"grid.n", [&](auto k, auto v) { n = parse_integer(k, v); }},
      {"grid.h", [&](auto k, auto v) { c.grid.h = parse_number(k, v); }},
      {"grid.half_width", [&](auto k, auto v) { c.grid.half_width = parse_number(k, v); }},
      {"grid.dt", [&](auto k, auto v) { c.grid.dt = parse_number(k, v); }},
      {"grid.t_begin", [&](auto k, auto v) { c.grid.t_begin = parse_number(k, v); }},
      {"grid.t_end", [&](auto k, auto v) { c.grid.t_end = parse_number(k, v); }},
      {"data.seed", [&](auto k, auto v) { c.seed = parse_u64(k, v); }},
      {"data.smoothness", [&](auto k, auto v) { c.smoothness = static_cast<int>(parse_integer(k, v)); }},
      {"data.tilt", [&](auto k, auto v) { c.tilt = parse_number(k, v); }},
      {"data.runs", [&](auto k, auto v) { c.runs = static_cast<int>(parse_integer(k, v)); }},
      {"cascade.ell", [&](auto k, auto v) { c.cascade.ell = parse_number(k, v); }},
      {"cascade.mu", [&](auto k, auto v) { c.cascade.mu = parse_number(k, v); }},
      {"cascade.tau", [&](auto k, auto v) { c.cascade.tau = parse_number(k, v); }},
      {"cascade.delta", [&](auto k, auto v) { c.cascade.delta = parse_number(k, v); }},
      {"cascade.c0", [&](auto k, auto v) { c.cascade.c0 = parse_number(k, v); }},
      {"cascade.c1", [&](auto k, auto v) { c.cascade.c1 = parse_number(k, v); }},
      {"cascade.levels", [&](auto k, auto v) { c.cascade.levels = static_cast<int>(parse_integer(k, v)); }},
      {"smallness.eps0", [&](auto k, auto v) { c.smallness.eps0 = parse_list(k, v); }},
      {"smallness.eps1", [&](auto k, auto v) { c.smallness.eps1 = parse_list(k, v); }},
      {"smallness.eta", [&](auto k, auto v) { c.smallness.eta = parse_list(k, v); }},
      {"smallness.gamma", [&](auto k, auto v) { c.smallness.gamma = parse_number(k, v); }},
      {"sweep.p", [&](auto k, auto v) { c.sweep_p = parse_list(k, v); }},
      {"sweep.eps", [&](auto k, auto v) { c.sweep_eps = parse_list(k, v); }},
      {"sweep.h", [&](auto k, auto v) { c.sweep_h = parse_list(k, v); }},
      {"convergence.h", [&](auto k, auto v) { c.convergence_h = parse_list(k, v); }},
      {"convergence.solution", [&](auto, auto v) { c.convergence_solution = std::string(trim(v)); }},
      {"holder.radii", [&](auto k, auto v) { c.holder_radii = parse_list(k, v); }},
      {"holder.lags", [&](auto k, auto v) { c.holder_lags = parse_list(k, v); }},
      {"comparison.gap", [&](auto k, auto v) { c.comparison_gap = parse_number(k, v); }},
      {"barrier.samples", [&](auto k, auto v) { c.barrier_samples = static_cast<int>(parse_integer(k, v)); }},
      {"barrier.points", [&](auto k, auto v) { c.barrier_points = static_cast<int>(parse_integer(k, v)); }},
      {"identity.points", [&](auto k, auto v) { c.identity_points = static_cast<int>(parse_integer(k, v)); }},
  };

  std::vector<std::string> unknown;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      unknown.push_back(key);
      continue;
    }
    if (!seen.insert(key).second) throw ConfigError("duplicate key " + key);
    it->second(key, value);
    c.echo.emplace_back(key, std::string(value));
  }
  if (!unknown.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

  if (kind && file_kind && *kind != *file_kind)
    throw ConfigError("experiment.kind = " + std::string(kind_name(*file_kind)) + " does not match the requested " +
                      std::string(kind_name(*kind)));
  if (!kind && !file_kind) throw ConfigError("missing required key experiment.kind");
  c.kind = kind ? *kind : *file_kind;

  const bool grid_based = c.kind != ExperimentKind::kBarrier && c.kind != ExperimentKind::kLemmaIdentity &&
                          c.kind != ExperimentKind::kConvergence;
  std::vector<std::string> missing;
  for (const char* key : {"solver.p", "grid.n"})
    if (!seen.contains(key)) missing.emplace_back(key);
  if (c.kind != ExperimentKind::kBarrier && !seen.contains("solver.eps")) missing.emplace_back("solver.eps");
  if (grid_based && !seen.contains("grid.h")) missing.emplace_back("grid.h");
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }
  if (!seen.contains("solver.eps")) eps = 0.1;

  if (n < 1 || n > kMaxDim) throw ConfigError("grid.n must be 1, 2 or 3");
  c.params = make_params(p, eps, static_cast<int>(n));
  for (const double q : c.sweep_p) make_params(q, eps, c.params.n);
  for (const double e : c.sweep_eps) make_params(p, e, c.params.n);

  require(c.cfl > 0.0 && c.cfl <= 1.0, "solver.cfl must lie in (0, 1]");
  require(c.record_stride >= 1, "solver.record_stride must be at least 1");
  require(c.smoothness >= 1, "data.smoothness must be at least 1");
  require(c.runs >= 1, "data.runs must be at least 1");
  require(c.grid.t_end > c.grid.t_begin, "grid.t_end must exceed grid.t_begin");
  require(c.grid.half_width > 0.0, "grid.half_width must be positive");
  if (c.grid.dt) require(*c.grid.dt > 0.0, "grid.dt must be positive");
  if (grid_based) {
    // Without grid.dt only the spatial step is checked here; the time step is derived later.
    const double dt_probe = c.grid.dt.value_or(c.grid.t_end - c.grid.t_begin);
    for (const double h : c.sweep_h.empty() ? std::vector<double>{c.grid.h} : c.sweep_h)
      make_grid(c.params.n, c.grid.half_width, h, dt_probe, c.grid.t_begin, c.grid.t_end);
  }
  require(c.cascade.ell > 0.0 && c.cascade.ell < 1.0, "cascade.ell must lie in (0, 1)");
  require(c.cascade.mu > 0.0, "cascade.mu must be positive");
  require(c.cascade.tau > 0.0 && c.cascade.tau < 0.25, "cascade.tau must lie in (0, 1/4)");
  require(c.cascade.delta > 0.0 && c.cascade.delta < 1.0, "cascade.delta must lie in (0, 1)");
  require(c.cascade.c0 > 0.0 && c.cascade.c1 > 0.0, "cascade.c0 and cascade.c1 must be positive");
  require(c.cascade.levels >= 0, "cascade.levels must be non-negative");
  require_positive_list(c.smallness.eps0, "smallness.eps0");
  require_positive_list(c.smallness.eps1, "smallness.eps1");
  require_positive_list(c.smallness.eta, "smallness.eta");
  require_positive_list(c.convergence_h, "convergence.h");
  require(c.convergence_h.size() >= 3, "convergence.h needs at least 3 levels");
  require(c.convergence_solution == "quadratic" || c.convergence_solution == "linear",
          "convergence.solution must be quadratic or linear");
  require_positive_list(c.holder_radii, "holder.radii");
  require_positive_list(c.holder_lags, "holder.lags");
  require(c.comparison_gap >= 0.0, "comparison.gap must be non-negative");
  require(c.barrier_samples >= 1 && c.barrier_points >= 1, "barrier.samples and barrier.points must be positive");
  require(c.identity_points >= 1, "identity.points must be positive");
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> kind) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), kind);
}

std::vector<double> p_values(const ExperimentConfig& c) {
  return c.sweep_p.empty() ? std::vector<double>{c.params.p} : c.sweep_p;
}

}  // namespace plap
