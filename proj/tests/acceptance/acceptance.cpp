// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "plap/coeffs.hpp"
#include "plap/config.hpp"
#include "plap/csv.hpp"
#include "plap/estimators.hpp"
#include "plap/experiments.hpp"
#include "plap/lemma_lab.hpp"
#include "plap/rng.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 means no runtime limit
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const Table& table(const Report& r, const std::string& name) {
  for (const auto& t : r.tables)
    if (t.name == name) return t.table;
  throw std::runtime_error("missing table " + name);
}

std::size_t col(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.headers.size(); ++i)
    if (t.headers[i] == name) return i;
  throw std::runtime_error("missing column " + name);
}

double num(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::numeric_limits<double>::quiet_NaN();
}

std::string str(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return format_double(num(c));
}

Report run(const std::string& text) { return run_experiment(parse_config(text)); }

std::size_t non_monotone(const Report& r) { return r.monotonicity.non_monotone; }

// ---------------------------------------------------------------------------

Outcome ellipticity() {
  SplitMix64 rng(1);
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_vieta = 0.0;
  for (int s = 0; s < 100000; ++s) {
    const int n = 1 + static_cast<int>(rng.integer(0, 2));
    const double p = rng.uniform(1.05, 10.0);
    const double eps = rng.uniform(0.0, 1.0);
    const double scale = std::pow(10.0, rng.uniform(-6.0, 2.0));
    Point q{};
    for (int i = 0; i < n; ++i) q[i] = scale * rng.uniform(-1.0, 1.0);
    const auto params = make_params(p, eps, n);
    const auto check = eigen_within_bounds(q, params);
    worst_margin = std::min(worst_margin, check.margin);
    if (s % 100 != 0) continue;
    // Elementary symmetric functions of the claimed spectrum against the
    // characteristic polynomial coefficients of the assembled matrix.
    const SymMatrix a = coeff_matrix(q, params);
    const auto& ev = check.eigenvalues;
    double e1 = 0.0, e2 = 0.0, e3 = 1.0;
    for (int i = 0; i < n; ++i) {
      e1 += ev[i];
      e3 *= ev[i];
      for (int j = i + 1; j < n; ++j) e2 += ev[i] * ev[j];
    }
    double minors = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) minors += a(i, i) * a(j, j) - a(i, j) * a(i, j);
    double det = a(0, 0);
    if (n == 2) det = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
    if (n == 3)
      det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2)) - a(0, 1) * (a(0, 1) * a(2, 2) - a(1, 2) * a(0, 2)) +
            a(0, 2) * (a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2));
    worst_vieta = std::max({worst_vieta, std::abs(e1 - a.trace()), std::abs(e2 - minors), std::abs(e3 - det)});
  }
  return {worst_margin >= -1e-12 && worst_vieta <= 1e-10,
          "min margin " + fmt(worst_margin) + ", max char-poly mismatch " + fmt(worst_vieta) + " on 1000 samples"};
}

Outcome identity() {
  double worst_gap = 0.0;
  bool sign = true;
  std::size_t fields = 0, evaluations = 0;
  for (int n = 2; n <= 3; ++n) {
    const auto r = run("experiment.kind = lemma-identity\nsolver.p = 3\nsolver.eps = 0.1\ngrid.n = " +
                       std::to_string(n) + "\nsweep.p = 1.5, 2, 3, 5, 8\nidentity.points = 100\n");
    const auto& t = table(r, "lemma_identity");
    for (const auto& row : t.rows) {
      worst_gap = std::max(worst_gap, num(row[col(t, "max_relative_gap")]));
      sign = sign && num(row[col(t, "sign_ok")]) == 1.0;
      evaluations += static_cast<std::size_t>(num(row[col(t, "points")]));
    }
    fields = r.json["results"]["fields"].get<std::size_t>();
  }
  return {fields >= 20 && worst_gap <= 1e-8 && sign,
          std::to_string(fields) + " fields x 100 points x 5 p (n = 2, 3; " + std::to_string(evaluations) +
              " evaluations), max gap " + fmt(worst_gap) + ", rhs sign " + (sign ? "ok" : "violated")};
}

Outcome convergence() {
  const auto r = run("experiment.kind = convergence\nsolver.p = 3\nsolver.eps = 1e-6\ngrid.n = 2\n"
                     "sweep.p = 1.5, 3\nconvergence.h = 1/8, 1/16, 1/32\nconvergence.solution = quadratic\n");
  bool pass = true;
  std::string detail;
  for (const auto& s : r.json["results"]["studies"]) {
    const double order = s["order"].is_null() ? std::numeric_limits<double>::infinity() : s["order"].get<double>();
    const double err = s["finest_error"].get<double>();
    const bool ok = order >= 1.8 && err <= 1e-3;
    pass = pass && ok;
    detail += "p=" + fmt(s["p"].get<double>()) + ": order " + fmt(order) + ", error(1/32) " + fmt(err) +
              (ok ? "" : " [miss]") + "; ";
  }
  return {pass && non_monotone(r) == 0, detail + "non-monotone updates " + std::to_string(non_monotone(r))};
}

Outcome comparison() {
  const auto r = run("experiment.kind = comparison\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/16\n"
                     "sweep.p = 1.5, 3\ndata.runs = 25\n");
  const auto& t = table(r, "comparison");
  std::size_t held = 0;
  double worst = 0.0;
  for (const auto& row : t.rows) {
    if (num(row[col(t, "holds")]) == 1.0 && num(row[col(t, "boundary_ordered")]) == 1.0) ++held;
    worst = std::max(worst, num(row[col(t, "worst_violation")]));
  }
  return {t.rows.size() == 50 && held == 50,
          std::to_string(held) + "/" + std::to_string(t.rows.size()) + " pairs ordered, worst violation " + fmt(worst)};
}

int stride_for(double p, double h, double recorded_dt) {
  const double dt = dyadic_time_step(h, make_params(p, 0.01, 2), 0.9);
  return std::max(1, static_cast<int>(std::lround(recorded_dt / dt)));
}

Outcome lipschitz() {
  const int stride = stride_for(3.0, 1.0 / 32, 1.0 / 256);
  std::map<double, std::map<double, double>> by_eps_h;
  bool finite = true;
  std::size_t nm = 0;
  for (const double h : {1.0 / 16, 1.0 / 32}) {
    const auto r = run("experiment.kind = lipschitz\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = " +
                       format_double(h) + "\nsweep.eps = 0.1, 0.01, 0.001\ndata.runs = 20\nsolver.record_stride = " +
                       std::to_string(h < 0.05 ? stride : std::max(1, stride / 4)) + "\n");
    nm += non_monotone(r);
    for (const auto& g : r.json["results"]["groups"]) {
      const double v = g["max_ratio"].get<double>();
      finite = finite && std::isfinite(v);
      by_eps_h[g["eps"].get<double>()][h] = v;
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, worst_refine = 0.0;
  std::string detail;
  for (const auto& [eps, m] : by_eps_h) {
    const double a = m.at(1.0 / 16), b = m.at(1.0 / 32);
    worst_refine = std::max(worst_refine, std::abs(b - a) / a);
    for (const double v : {a, b}) lo = std::min(lo, v), hi = std::max(hi, v);
    detail += "eps=" + fmt(eps) + ": " + fmt(a) + " -> " + fmt(b) + "; ";
  }
  const double spread = (hi - lo) / lo;
  return {finite && spread <= 0.2 && nm == 0,
          detail + "spread over all groups " + fmt(spread) + ", worst h->h/2 change " + fmt(worst_refine)};
}

Outcome holder() {
  // Synthetic profiles q.x + |x_0|^(1 + beta) on a fine 1D grid.
  double worst_beta = 0.0;
  const Grid g1 = make_grid(1, 1.0, 1.0 / 8192, 1.0, -1.0, 0.0);
  const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625, 0.03125};
  for (const double beta : {0.3, 0.5, 0.8}) {
    const auto u = sample_field(g1, [&](const Point& x, double) { return 0.4 * x[0] + std::pow(std::abs(x[0]), 1 + beta); });
    worst_beta = std::max(worst_beta, std::abs(holder_fit_space(u, {0, 0, 0}, 0.0, radii).alpha - beta));
  }

  const int stride = stride_for(3.0, 1.0 / 32, 1.0 / 256);
  const auto r = run("experiment.kind = holder\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/32\n"
                     "sweep.eps = 0.1, 0.01, 0.001\ndata.runs = 10\nsolver.record_stride = " +
                     std::to_string(stride) + "\n");
  const auto& t = table(r, "holder");
  std::size_t fits = 0, bad_alpha = 0, bad_time = 0, failed = 0;
  double worst_time = 0.0, worst_variation = 0.0;
  std::map<std::int64_t, std::vector<double>> alphas;
  for (const auto& row : t.rows) {
    ++fits;
    if (str(row[col(t, "status")]) != "ok") {
      ++failed;
      continue;
    }
    const double a = num(row[col(t, "alpha_space")]);
    if (!(a > 0.05 && num(row[col(t, "residual_space")]) < 0.3)) ++bad_alpha;
    const double dev = std::abs(num(row[col(t, "time_exponent")]) - 0.5 * (1.0 + a));
    worst_time = std::max(worst_time, dev);
    if (dev > 0.15) ++bad_time;
    alphas[static_cast<std::int64_t>(num(row[col(t, "seed")]))].push_back(a);
  }
  for (const auto& [seed, v] : alphas) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    worst_variation = std::max(worst_variation, (*mx - *mn) / *mn);
  }
  const bool pass = worst_beta <= 0.05 && failed == 0 && bad_alpha == 0 && bad_time == 0 && worst_variation <= 0.3;
  return {pass, std::to_string(fits) + " fits (" + std::to_string(failed) + " unfit), alpha/residual misses " +
                    std::to_string(bad_alpha) + ", time-exponent misses " + std::to_string(bad_time) +
                    " (worst |dev| " + fmt(worst_time) + "), alpha variation over eps " + fmt(worst_variation) +
                    ", synthetic beta error " + fmt(worst_beta)};
}

Outcome slice_transfer() {
  const auto r = run("experiment.kind = slice-transfer\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/16\n"
                     "sweep.p = 1.5, 2, 3\ndata.runs = 10\n");
  const auto& t = table(r, "slice_transfer");
  std::size_t passed = 0;
  double worst_ratio = 0.0;
  for (const auto& row : t.rows) {
    if (num(row[col(t, "pass")]) == 1.0) ++passed;
    const double a = num(row[col(t, "max_slice_oscillation")]);
    if (a > 0) worst_ratio = std::max(worst_ratio, num(row[col(t, "full_oscillation")]) / a);
  }
  return {t.rows.size() == 30 && passed == 30,
          std::to_string(passed) + "/" + std::to_string(t.rows.size()) + " runs, worst full/slice ratio " +
              fmt(worst_ratio)};
}

Outcome dichotomy() {
  std::size_t runs = 0, stopped = 0, nested = 0, unresolved = 0, broken = 0, hypotheses = 0, rows = 0, within = 0;
  double worst_dev_ratio = 0.0;
  for (const char* tilt : {"0", "2"}) {
    const auto r = run(std::string("experiment.kind = cascade\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\n"
                                   "grid.h = 1/32\ndata.runs = 5\ndata.tilt = ") +
                       tilt + "\n");
    const auto& t = table(r, "dichotomy");
    for (const auto& row : t.rows) {
      ++runs;
      const std::string b = str(row[col(t, "branch")]);
      if (b == "stopped") {
        ++stopped;
        if (num(row[col(t, "implication_all")]) != 1.0) ++broken;
      } else if (b == "nested") {
        ++nested;
        if (num(row[col(t, "nesting_monotone")]) != 1.0) ++broken;
      } else {
        ++unresolved;
      }
    }
    const auto& s = table(r, "dichotomy_smallness");
    for (const auto& row : s.rows) {
      ++rows;
      if (num(row[col(s, "deviation")]) <= num(row[col(s, "eta")])) ++within;
      if (num(row[col(s, "hypothesis")]) == 1.0) {
        ++hypotheses;
        worst_dev_ratio = std::max(worst_dev_ratio, num(row[col(s, "deviation")]) / num(row[col(s, "eta")]));
      }
    }
  }
  return {unresolved == 0 && broken == 0,
          std::to_string(runs) + " runs: " + std::to_string(stopped) + " stopped, " + std::to_string(nested) +
              " nested, " + std::to_string(unresolved) + " unresolved, " + std::to_string(broken) +
              " branch checks failed; " + std::to_string(hypotheses) + "/" + std::to_string(rows) +
              " smallness hypotheses met (worst deviation/eta " + fmt(worst_dev_ratio) + "), deviation <= eta in " +
              std::to_string(within) + "/" + std::to_string(rows) + " rows"};
}

Outcome barrier() {
  bool pass = true;
  std::string detail;
  for (int n = 1; n <= 3; ++n) {
    const auto r = run("experiment.kind = barrier\nsolver.p = 3\ngrid.n = " + std::to_string(n) +
                       "\nsweep.p = 1.5, 2, 3\nbarrier.points = 10000\n");
    const auto& t = table(r, "barrier");
    for (const auto& row : t.rows) {
      const double p = num(row[col(t, "p")]);
      const double delta = num(row[col(t, "delta")]);
      const bool exact = num(row[col(t, "zero_failures")]) == 0 && num(row[col(t, "cap_failures")]) == 0 &&
                         num(row[col(t, "zero_checked")]) > 0 && num(row[col(t, "cap_checked")]) > 0;
      pass = pass && delta > 0 && exact;
      if (n == 1 && p == 2.0) {
        pass = pass && delta == 0.25;
        detail += "n=1 lambda=Lambda=1: delta " + fmt(delta) + "; ";
      }
      if (p != 2.0) detail += "n=" + std::to_string(n) + " p=" + fmt(p) + ": delta " + fmt(delta) + "; ";
    }
  }
  return {pass, detail + "bullets 1 and 3 checked at 10000 points each"};
}

Outcome eps_stability() {
  const auto r = run("experiment.kind = eps-sweep\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/16\n"
                     "data.runs = 5\n");
  const auto& t = table(r, "eps_sweep");
  std::size_t bad = 0;
  std::string where;
  for (const auto& row : t.rows)
    if (num(row[col(t, "decreasing")]) != 1.0) {
      ++bad;
      where += " seed " + str(row[col(t, "seed")]) + " eps " + str(row[col(t, "eps")]) + ";";
    }
  return {bad == 0, std::to_string(t.rows.size()) + " steps, " + std::to_string(bad) + " not strictly decreasing" +
                        (where.empty() ? "" : ":" + where)};
}

std::string all_csv(const Report& r) {
  std::string s;
  for (const auto& t : r.tables) s += t.name + "\n" + format_csv(t.table);
  return s;
}

Outcome determinism() {
  const std::vector<std::string> configs = {
      "experiment.kind = solve\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/8\n",
      "experiment.kind = convergence\nsolver.p = 1.5\nsolver.eps = 1e-6\ngrid.n = 2\nconvergence.h = 1/4, 1/8, 1/16\n",
      "experiment.kind = lipschitz\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/8\ndata.runs = 2\n",
      "experiment.kind = holder\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/16\n",
      "experiment.kind = cascade\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/16\ndata.tilt = 2\n",
      "experiment.kind = smallness\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 3\ngrid.h = 1/8\n",
      "experiment.kind = slice-transfer\nsolver.p = 2\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/8\n",
      "experiment.kind = lemma-identity\nsolver.p = 3\nsolver.eps = 0.1\ngrid.n = 3\nidentity.points = 10\n",
      "experiment.kind = barrier\nsolver.p = 3\ngrid.n = 2\nbarrier.points = 1000\n",
      "experiment.kind = eps-sweep\nsolver.p = 3\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/8\nsweep.eps = 1/4, 1/8\n",
      "experiment.kind = comparison\nsolver.p = 1.5\nsolver.eps = 0.01\ngrid.n = 2\ngrid.h = 1/8\ndata.runs = 2\n",
  };
  std::size_t identical = 0;
  std::string mismatched;
  for (const auto& text : configs) {
    omp_set_num_threads(1);
    const std::string a = all_csv(run(text));
    const std::string b = all_csv(run(text));
    omp_set_num_threads(4);
    const std::string c = all_csv(run(text));
    if (a == b && a == c)
      ++identical;
    else
      mismatched += " " + std::string(kind_name(parse_config(text).kind));
  }
  omp_set_num_threads(omp_get_num_procs());
  return {identical == configs.size(), std::to_string(identical) + "/" + std::to_string(configs.size()) +
                                           " experiment kinds byte-identical across reruns and 1 vs 4 threads" +
                                           (mismatched.empty() ? "" : "; differ:" + mismatched)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "ellipticity", 5, ellipticity},
      {2, "subsolution identity", 10, identity},
      {3, "manufactured convergence", 120, convergence},
      {4, "comparison principle", 300, comparison},
      {5, "lipschitz ratio", 600, lipschitz},
      {6, "holder fits", 600, holder},
      {7, "slice oscillation transfer", 300, slice_transfer},
      {8, "cascade dichotomy", 600, dichotomy},
      {9, "barrier", 5, barrier},
      {10, "eps stability", 600, eps_stability},
      {11, "determinism", 0, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_seconds == 0 || secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::string budget = c.budget_seconds == 0 ? "" : " / " + fmt(c.budget_seconds) + " s";
    std::printf("%s %2d %-28s %s [%.1f s%s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs,
                budget.c_str(), in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
