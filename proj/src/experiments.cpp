#include "plap/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "plap/analytic.hpp"
#include "plap/boundary_data.hpp"
#include "plap/calculus.hpp"
#include "plap/error.hpp"
#include "plap/estimators.hpp"
#include "plap/lemma_lab.hpp"
#include "plap/rng.hpp"

namespace plap {
namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }
std::int64_t as_int(bool v) { return v ? 1 : 0; }

struct Context {
  const ExperimentConfig& cfg;
  Report& report;

  PLaplaceParams params(double p, double eps) const { return make_params(p, eps, cfg.params.n); }

  Grid grid(double h, const PLaplaceParams& params) const {
    const double dt = cfg.grid.dt ? *cfg.grid.dt : dyadic_time_step(h, params, cfg.cfl);
    return make_grid(cfg.params.n, cfg.grid.half_width, h, dt, cfg.grid.t_begin, cfg.grid.t_end);
  }

  std::uint64_t run_seed(int run) const { return cfg.seed + static_cast<std::uint64_t>(run); }

  BoundaryPtr data(std::uint64_t seed) const {
    BoundaryPtr g = generate_boundary_data(seed, cfg.smoothness, cfg.params.n);
    if (cfg.tilt == 0.0) return g;
    const auto ramp = make_function_boundary([](const Point& x, double) { return x[0]; });
    return make_combined_boundary(g, 1.0, ramp, cfg.tilt, 0.0);
  }

  SpaceTimeField solve_field(const PLaplaceParams& params, double h, const BoundaryPtr& g) {
    const Grid gr = grid(h, params);
    const SolveConfig sc = make_solve_config(gr, params, cfg.cfl, cfg.monotonicity_check, cfg.record_stride);
    Solution sol = solve(sc, g, spanning_cylinder(gr));
    report.monotonicity.node_updates += sol.monotonicity.node_updates;
    report.monotonicity.non_monotone += sol.monotonicity.non_monotone;
    return std::move(sol.field);
  }
};

// Mean of grad_h u over the top level of the reference cylinder's gradient
// sample, normalized; falls back to e_0 when it vanishes.
Point mean_gradient_direction(const SpaceTimeField& u) {
  const auto sample = gradient_sample(u, reference_cylinder(u));
  Point sum{};
  for (const std::size_t node : sample.nodes) sum = sum + gradient(u, node, sample.last_level);
  const double len = norm(sum);
  if (!(len > 0.0)) return Point{1.0, 0.0, 0.0};
  return (1.0 / len) * sum;
}

std::vector<Point> cascade_directions(const SpaceTimeField& u) {
  std::vector<Point> dirs;
  for (int a = 0; a < u.grid().dim(); ++a) {
    Point e{};
    e[a] = 1.0;
    dirs.push_back(e);
    e[a] = -1.0;
    dirs.push_back(e);
  }
  dirs.push_back(mean_gradient_direction(u));
  return dirs;
}

std::vector<SmallnessParams> smallness_sweep(const ExperimentConfig& cfg) {
  std::vector<SmallnessParams> out;
  for (const double e0 : cfg.smallness.eps0)
    for (const double e1 : cfg.smallness.eps1)
      for (const double eta : cfg.smallness.eta) out.push_back({Point{}, e0, e1, eta, cfg.smallness.gamma});
  return out;
}

OscCascadeParams cascade_params(const ExperimentConfig& cfg) {
  const auto& c = cfg.cascade;
  return OscCascadeParams(c.ell, c.mu, c.tau, c.delta, c.c0, c.c1);
}

double max_abs_difference(const SpaceTimeField& a, const SpaceTimeField& b) {
  const auto va = a.values();
  const auto vb = b.values();
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  return worst;
}

std::string branch_name(DichotomyBranch b) {
  switch (b) {
    case DichotomyBranch::kStopped:
      return "stopped";
    case DichotomyBranch::kNested:
      return "nested";
    default:
      return "unresolved";
  }
}

// ---------------------------------------------------------------------------

void run_solve(Context& ctx) {
  const auto& cfg = ctx.cfg;
  Table summary{{"seed", "p", "eps", "h", "final_min", "final_max", "oscillation", "sup_gradient"}, {}};
  Table field_table;
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const SpaceTimeField u = ctx.solve_field(params, cfg.grid.h, ctx.data(seed));
      const Grid& g = u.grid();
      const auto cyl = reference_cylinder(u);
      const int top = g.levels() - 1;
      const auto cn = cylinder_nodes(g, cyl);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const std::size_t node : cn.ball) {
        lo = std::min(lo, u.at(node, top));
        hi = std::max(hi, u.at(node, top));
      }
      summary.add({as_int(seed), p, params.eps, cfg.grid.h, lo, hi, oscillation(u, cyl), sup_gradient(u, cyl)});
      if (field_table.headers.empty()) {
        field_table.headers = {"seed", "p"};
        const char* names[] = {"x0", "x1", "x2"};
        for (int a = 0; a < g.dim(); ++a) field_table.headers.emplace_back(names[a]);
        field_table.headers.emplace_back("u");
        for (std::size_t node = 0; node < g.node_count(); ++node) {
          std::vector<Cell> row{as_int(seed), p};
          const Point x = g.point(node);
          for (int a = 0; a < g.dim(); ++a) row.emplace_back(x[a]);
          row.emplace_back(u.at(node, top));
          field_table.add(std::move(row));
        }
      }
    }
  }
  ctx.report.json["results"] = {{"runs", summary.rows.size()}};
  ctx.report.tables.push_back({"solve", std::move(summary)});
  ctx.report.tables.push_back({"final_level", std::move(field_table)});
}

void run_convergence(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto kind =
      cfg.convergence_solution == "linear" ? ManufacturedSolution::kLinear : ManufacturedSolution::kQuadratic;
  Table t{{"seed", "p", "solution", "h", "dt", "max_error"}, {}};
  json per_p = json::array();
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    const auto res = convergence_study(params, cfg.convergence_h, kind, cfg.cfl);
    for (const auto& row : res.rows) t.add({as_int(cfg.seed), p, cfg.convergence_solution, row.h, row.dt, row.max_error});
    per_p.push_back({{"p", p},
                     {"order", res.exact ? json(nullptr) : json(res.order)},
                     {"exact", res.exact},
                     {"finest_error", res.rows.back().max_error}});
  }
  ctx.report.json["results"] = {{"studies", per_p}};
  ctx.report.tables.push_back({"convergence", std::move(t)});
}

void run_lipschitz(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto eps_list = cfg.sweep_eps.empty() ? std::vector<double>{cfg.params.eps} : cfg.sweep_eps;
  const auto h_list = cfg.sweep_h.empty() ? std::vector<double>{cfg.grid.h} : cfg.sweep_h;
  Table t{{"seed", "p", "eps", "h", "ratio", "sup_gradient_half", "sup_abs"}, {}};
  json groups = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const double p : p_values(cfg)) {
    for (const double eps : eps_list) {
      for (const double h : h_list) {
        const auto params = ctx.params(p, eps);
        double group_max = 0.0;
        for (int r = 0; r < cfg.runs; ++r) {
          const auto seed = ctx.run_seed(r);
          const SpaceTimeField u = ctx.solve_field(params, h, ctx.data(seed));
          const auto res = lipschitz_ratio(u, params);
          t.add({as_int(seed), p, eps, h, res.ratio, res.sup_gradient, res.sup_abs});
          group_max = std::max(group_max, res.ratio);
        }
        lo = std::min(lo, group_max);
        hi = std::max(hi, group_max);
        groups.push_back({{"p", p}, {"eps", eps}, {"h", h}, {"max_ratio", group_max}});
      }
    }
  }
  ctx.report.json["results"] = {{"groups", groups}, {"max_ratio_relative_spread", (hi - lo) / lo}};
  ctx.report.tables.push_back({"lipschitz", std::move(t)});
}

void run_holder(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto eps_list = cfg.sweep_eps.empty() ? std::vector<double>{cfg.params.eps} : cfg.sweep_eps;
  Table t{{"seed", "p", "eps", "alpha_space", "C_space", "residual_space", "time_exponent", "time_exponent_sqrt_scale",
           "residual_time", "target_time_exponent", "status"},
          {}};
  for (const double p : p_values(cfg)) {
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const auto g = ctx.data(seed);
      for (const double eps : eps_list) {
        const auto params = ctx.params(p, eps);
        const SpaceTimeField u = ctx.solve_field(params, cfg.grid.h, g);
        const auto cyl = reference_cylinder(u);
        try {
          const auto sf = holder_fit_space(u, cyl.center, cyl.t_top, cfg.holder_radii);
          const auto tf = holder_fit_time(u, cyl.center, cfg.holder_lags);
          t.add({as_int(seed), p, eps, sf.alpha, sf.C, sf.residual, tf.exponent, tf.exponent_sqrt_scale, tf.residual,
                 0.5 * (1.0 + sf.alpha), std::string("ok")});
        } catch (const DomainError& e) {
          t.add({as_int(seed), p, eps, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, std::string(e.what())});
        }
      }
    }
  }
  ctx.report.json["results"] = {{"fits", t.rows.size()}};
  ctx.report.tables.push_back({"holder", std::move(t)});
}

void run_cascade(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto cp = cascade_params(cfg);
  const auto sweep = smallness_sweep(cfg);
  Table records{{"seed", "p", "direction", "level", "radius", "threshold", "fraction", "condition_held", "sup_next",
                 "predicted", "wbar_threshold"},
                {}};
  Table dich{{"seed", "p", "branch", "stop_level", "levels_measured", "nesting_monotone", "implication_all",
              "effective_eps", "effective_eps_squared", "normalization"},
             {}};
  Table small{{"seed", "p", "eps0", "eps1", "eta", "fraction", "best_a", "deviation", "hypothesis", "implication"}, {}};
  std::size_t unresolved = 0;
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const auto [u, scale] = normalize_gradient(ctx.solve_field(params, cfg.grid.h, ctx.data(seed)));
      const auto dirs = cascade_directions(u);
      const auto res = cascade_dichotomy(u, dirs, cp, cfg.cascade.levels, params.eps * scale, sweep);
      for (std::size_t d = 0; d < res.cascades.size(); ++d)
        for (const auto& rec : res.cascades[d].records)
          records.add({as_int(seed), p, static_cast<std::int64_t>(d), static_cast<std::int64_t>(rec.level), rec.radius,
                       rec.threshold, rec.fraction, as_int(rec.condition_held), rec.sup_next, rec.predicted,
                       wbar_transform(rec.threshold, cp)});
      dich.add({as_int(seed), p, branch_name(res.branch), static_cast<std::int64_t>(res.stop_level),
                static_cast<std::int64_t>(res.levels_measured), as_int(res.nesting_monotone),
                as_int(res.implication_all), res.effective_eps, res.effective_eps_squared, scale});
      for (std::size_t i = 0; i < res.smallness.size(); ++i) {
        const auto& s = res.smallness[i];
        small.add({as_int(seed), p, sweep[i].eps0, sweep[i].eps1, sweep[i].eta, s.fraction, s.best_a, s.deviation,
                   as_int(s.hypothesis), as_int(s.implication)});
      }
      if (res.branch == DichotomyBranch::kUnresolved) ++unresolved;
    }
  }
  ctx.report.json["results"] = {{"runs", dich.rows.size()},
                                {"unresolved", unresolved},
                                {"c0", cfg.cascade.c0},
                                {"c1", cfg.cascade.c1},
                                {"constants_note", "c0 and c1 are not fixed by the theory; defaults are arbitrary"}};
  ctx.report.tables.push_back({"cascade_levels", std::move(records)});
  ctx.report.tables.push_back({"dichotomy", std::move(dich)});
  ctx.report.tables.push_back({"dichotomy_smallness", std::move(small)});
}

void run_smallness(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto sweep = smallness_sweep(cfg);
  Table t{{"seed", "p", "eps0", "eps1", "eta", "fraction", "best_a", "deviation", "hypothesis", "implication"}, {}};
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const auto [u, scale] = normalize_gradient(ctx.solve_field(params, cfg.grid.h, ctx.data(seed)));
      const Point e = mean_gradient_direction(u);
      for (auto s : sweep) {
        s.e = e;
        const auto res = gradient_smallness(u, s, reference_cylinder(u));
        t.add({as_int(seed), p, s.eps0, s.eps1, s.eta, res.fraction, res.best_a, res.deviation, as_int(res.hypothesis),
               as_int(res.implication)});
      }
    }
  }
  ctx.report.json["results"] = {{"rows", t.rows.size()}};
  ctx.report.tables.push_back({"smallness", std::move(t)});
}

void run_slice_transfer(Context& ctx) {
  const auto& cfg = ctx.cfg;
  Table t{{"seed", "p", "max_slice_oscillation", "full_oscillation", "transfer_constant", "applicable", "pass"}, {}};
  std::size_t failures = 0;
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const SpaceTimeField u = ctx.solve_field(params, cfg.grid.h, ctx.data(seed));
      const auto q1 = reference_cylinder(u);
      const auto b = slice_osc_transfer(u, {q1.center, q1.t_top, 0.5 * q1.radius}, params);
      t.add({as_int(seed), p, b.A, b.full, b.transfer_constant, as_int(b.applicable), as_int(b.pass)});
      if (!b.pass) ++failures;
    }
  }
  ctx.report.json["results"] = {{"runs", t.rows.size()}, {"failures", failures}};
  ctx.report.tables.push_back({"slice_transfer", std::move(t)});
}

void run_lemma_identity(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n = cfg.params.n;
  const auto library = analytic_library(n);
  Table t{{"seed", "p", "field", "points", "max_relative_gap", "max_rhs", "sign_ok"}, {}};
  double worst_gap = 0.0;
  bool all_sign = true;
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    SplitMix64 rng(cfg.seed);
    for (const auto& field : library) {
      double gap = 0.0, rhs = -std::numeric_limits<double>::infinity();
      bool sign = true;
      for (int i = 0; i < cfg.identity_points; ++i) {
        Point x{};
        for (int a = 0; a < n; ++a) x[a] = rng.uniform(-1.0, 1.0);
        const auto rep = subsolution_identity(*field, params, x);
        gap = std::max(gap, rep.relative_gap);
        rhs = std::max(rhs, rep.rhs_identity);
        sign = sign && rep.sign_ok;
      }
      t.add({as_int(cfg.seed), p, field->name(), static_cast<std::int64_t>(cfg.identity_points), gap, rhs, as_int(sign)});
      worst_gap = std::max(worst_gap, gap);
      all_sign = all_sign && sign;
    }
  }
  ctx.report.json["results"] = {{"fields", library.size()}, {"max_relative_gap", worst_gap}, {"all_sign_ok", all_sign}};
  ctx.report.tables.push_back({"lemma_identity", std::move(t)});
}

void run_barrier(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n = cfg.params.n;
  Table t{{"seed", "n", "p", "lambda", "Lambda", "delta", "worst_margin", "zero_checked", "zero_failures", "cap_checked",
           "cap_failures", "smooth_checked", "smooth_failures", "smooth_worst"},
          {}};
  json rows = json::array();
  for (const double p : p_values(cfg)) {
    const auto bounds = ellipticity_bounds(ctx.params(p, cfg.params.eps));
    const auto found = barrier_find_delta(bounds, n, cfg.barrier_samples);
    const BarrierSpec spec(found.delta, n, bounds);
    const auto pts = barrier_sample_points(n, static_cast<std::size_t>(cfg.barrier_points), cfg.seed);
    const auto rep = psi_properties(spec, pts);
    t.add({as_int(cfg.seed), static_cast<std::int64_t>(n), p, bounds.lambda, bounds.Lambda, found.delta,
           found.worst_margin, static_cast<std::int64_t>(rep.zero_checked), static_cast<std::int64_t>(rep.zero_failures),
           static_cast<std::int64_t>(rep.cap_checked), static_cast<std::int64_t>(rep.cap_failures),
           static_cast<std::int64_t>(rep.smooth_checked), static_cast<std::int64_t>(rep.smooth_failures),
           rep.smooth_worst});
    rows.push_back({{"p", p}, {"delta_b", found.delta}, {"worst_margin", found.worst_margin}, {"note", rep.note}});
  }
  ctx.report.json["results"] = {{"barriers", rows}};
  ctx.report.tables.push_back({"barrier", std::move(t)});
}

void run_eps_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<double> eps_list = cfg.sweep_eps;
  if (eps_list.empty())
    for (int k = 2; k <= 8; ++k) eps_list.push_back(std::ldexp(1.0, -k));
  Table t{{"seed", "p", "eps", "sup_difference_to_half", "decreasing"}, {}};
  std::size_t non_decreasing = 0;
  for (const double p : p_values(cfg)) {
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const auto g = ctx.data(seed);
      std::optional<SpaceTimeField> cached;
      double cached_eps = kNaN;
      double prev = std::numeric_limits<double>::infinity();
      for (const double eps : eps_list) {
        SpaceTimeField u = (cached && cached_eps == eps) ? std::move(*cached)
                                                         : ctx.solve_field(ctx.params(p, eps), cfg.grid.h, g);
        SpaceTimeField v = ctx.solve_field(ctx.params(p, 0.5 * eps), cfg.grid.h, g);
        const double diff = max_abs_difference(u, v);
        const bool decreasing = diff < prev;
        if (!decreasing) ++non_decreasing;
        t.add({as_int(seed), p, eps, diff, as_int(decreasing)});
        prev = diff;
        cached = std::move(v);
        cached_eps = 0.5 * eps;
      }
    }
  }
  ctx.report.json["results"] = {{"rows", t.rows.size()}, {"non_decreasing_steps", non_decreasing}};
  ctx.report.tables.push_back({"eps_sweep", std::move(t)});
}

void run_comparison(Context& ctx) {
  const auto& cfg = ctx.cfg;
  Table t{{"seed", "p", "gap", "boundary_ordered", "holds", "worst_violation", "violations"}, {}};
  std::size_t failures = 0;
  for (const double p : p_values(cfg)) {
    const auto params = ctx.params(p, cfg.params.eps);
    for (int r = 0; r < cfg.runs; ++r) {
      const auto seed = ctx.run_seed(r);
      const auto gu = ctx.data(seed);
      // g_v = g_u + gap (1.5 + 0.5 w) with |w| <= 1 on the normalization lattice.
      const auto w = generate_boundary_data(~seed, cfg.smoothness, cfg.params.n);
      const double gap = cfg.comparison_gap;
      const auto gv = make_combined_boundary(gu, 1.0, w, 0.5 * gap, 1.5 * gap);
      const SpaceTimeField u = ctx.solve_field(params, cfg.grid.h, gu);
      const SpaceTimeField v = ctx.solve_field(params, cfg.grid.h, gv);
      const auto res = comparison_check(u, v);
      t.add({as_int(seed), p, gap, as_int(res.boundary_ordered), as_int(res.holds), res.worst_violation,
             static_cast<std::int64_t>(res.violations)});
      if (!res.holds || !res.boundary_ordered) ++failures;
    }
  }
  ctx.report.json["results"] = {{"pairs", t.rows.size()}, {"failures", failures}};
  ctx.report.tables.push_back({"comparison", std::move(t)});
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  Report report;
  report.json["tool"] = "plap_lab";
  report.json["version"] = kToolVersion;
  report.json["experiment"] = std::string(kind_name(config.kind));
  report.json["seed"] = config.seed;
  json echo = json::object();
  for (const auto& [k, v] : config.echo) echo[k] = v;
  report.json["config"] = echo;
  report.json["started_at"] = utc_now();

  Context ctx{config, report};
  switch (config.kind) {
    case ExperimentKind::kSolve: run_solve(ctx); break;
    case ExperimentKind::kConvergence: run_convergence(ctx); break;
    case ExperimentKind::kLipschitz: run_lipschitz(ctx); break;
    case ExperimentKind::kHolder: run_holder(ctx); break;
    case ExperimentKind::kCascade: run_cascade(ctx); break;
    case ExperimentKind::kSmallness: run_smallness(ctx); break;
    case ExperimentKind::kSliceTransfer: run_slice_transfer(ctx); break;
    case ExperimentKind::kLemmaIdentity: run_lemma_identity(ctx); break;
    case ExperimentKind::kBarrier: run_barrier(ctx); break;
    case ExperimentKind::kEpsSweep: run_eps_sweep(ctx); break;
    case ExperimentKind::kComparison: run_comparison(ctx); break;
  }

  report.json["finished_at"] = utc_now();
  report.json["monotonicity"] = {{"check_enabled", config.monotonicity_check},
                                 {"node_updates", report.monotonicity.node_updates},
                                 {"non_monotone", report.monotonicity.non_monotone},
                                 {"pass_rate", report.monotonicity.pass_rate()}};
  json files = json::array();
  for (const auto& t : report.tables) files.push_back(t.name + ".csv");
  report.json["tables"] = files;
  return report;
}

void write_report(Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  report.json["written_at"] = utc_now();
  for (const auto& t : report.tables) emit_csv(t.table, dir / (t.name + ".csv"));
  std::ofstream f(dir / "report.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (dir / "report.json").string());
  f << report.json.dump(2) << '\n';
  if (report.monotonicity.pass_rate() < 1.0)
    std::cerr << "warning: monotone-stencil pass rate " << report.monotonicity.pass_rate() << " is below 100%\n";
}

}  // namespace plap
