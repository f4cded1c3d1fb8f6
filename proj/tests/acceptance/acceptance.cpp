// Acceptance checks. Prints one PASS/FAIL line per check; exit status 1 if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optocool/error.hpp"
#include "optocool/moments.hpp"
#include "optocool/oracle.hpp"
#include "optocool/rwa.hpp"
#include "optocool/spectrum.hpp"
#include "optocool/sweep.hpp"
#include "reference.hpp"

namespace {

using namespace optocool;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const std::string& id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s  %-4s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SystemParams fig1(double g) { return preset("paper_fig1").params.with_g(g); }

/// Mean spacing of the Rabi dips of N_b on [0, t_end], each dip refined by golden section.
double dip_period(const NbEvaluator& eval, double t_end) {
  const auto times = linspace(0.0, t_end, static_cast<std::size_t>(t_end / 0.01) + 1);
  const auto nb = eval.sample(times);
  const SystemParams& p = eval.params();
  std::vector<double> dips;
  std::size_t i = 0;
  while (i < times.size()) {
    const double upper = p.n_th * std::exp(-(p.kappa + p.gamma) * times[i] / 2.0);
    if (nb[i] >= 0.25 * upper) {
      ++i;
      continue;
    }
    std::size_t best = i;
    while (i < times.size() && nb[i] < 0.25 * p.n_th * std::exp(-(p.kappa + p.gamma) * times[i] / 2.0)) {
      if (nb[i] < nb[best]) best = i;
      ++i;
    }
    if (best == 0 || best + 1 >= times.size()) continue;
    dips.push_back(golden_section_minimize([&eval](double t) { return eval(t); }, times[best - 1],
                                           times[best + 1], 1e-7)
                       .first);
  }
  if (dips.size() < 2) return NAN;
  return (dips.back() - dips.front()) / static_cast<double>(dips.size() - 1);
}

void criterion_1() {
  const auto start = Clock::now();
  const SystemParams p = fig1(0.1);
  const auto times = linspace(0.0, 200.0, 2001);
  const Trajectory tr = propagate(build_matrices(p), initial_vector(p.n_th), times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    worst = std::max(worst, std::abs(tr.n_b[k] - nb_rwa_analytic(p, times[k])));
  const double rel = worst / p.n_th;
  report("1a", rel < 0.05, "ten-moment N_b vs closed-form RWA curve on [0, 200]",
         fmt("max|dev|/n_th = %.4g (tol 0.05)", rel));

  const double half = pi / std::abs(p.G);
  const double t_rwa = dip_period(NbEvaluator(p, Mode::kRwa), 200.0);
  const double predicted = 2.0 * pi / corrected_splitting(p);
  const double excess = t_rwa / half - 1.0;
  report("1b", excess > 0.0 && excess < 0.01 && std::abs(t_rwa / predicted - 1.0) < 1e-3,
         "RWA oscillation period exceeds pi/|G| by < 1% (corrected splitting)",
         fmt("T/(pi/|G|) - 1 = %.3e, T/(2pi/splitting) - 1 = %.3e", excess, t_rwa / predicted - 1.0));

  const double t_full = dip_period(NbEvaluator(p, Mode::kFull), 200.0);
  const double full_dev = t_full / half - 1.0;
  report("1c", std::abs(full_dev) < 0.01, "ten-moment oscillation period within 1% of pi/|G|",
         fmt("T/(pi/|G|) - 1 = %.3e", full_dev));

  const double elapsed = seconds_since(start);
  report("1d", elapsed < 5.0, "runtime", fmt("%.2f s (limit 5 s)", elapsed));
}

void criterion_2() {
  const auto start = Clock::now();
  const auto g = linspace(0.05, 0.2, 16);
  const LimitCurve curve = limit_curve_vs_g(fig1(0.1), g, Mode::kRwa);
  double worst = 0.0;
  double worst_g = 0.0;
  for (const auto& pt : curve.points) {
    const double dev = std::abs(pt.numeric_min / pt.n_ins_rwa - 1.0);
    if (dev > worst) {
      worst = dev;
      worst_g = pt.abscissa;
    }
  }
  report("2a", worst < 0.10, "RWA-model minima vs pi gamma n_th/(4|G|), G in [0.05, 0.2]",
         fmt("worst relative deviation %.4f at G = %.4f (tol 0.10)", worst, worst_g));

  const SystemParams p = fig1(0.1);
  const double n_ins = extract_n_ins(p, Mode::kRwa).n_min;
  const double n_ss = steady_state_rwa(p).n_b;
  const double factor = pi * p.kappa / (4.0 * std::abs(p.G));
  const double ratio = n_ins / n_ss;
  report("2b", std::abs(ratio / factor - 1.0) < 0.25,
         "advantage n_ins/n_ss vs pi kappa/(4|G|) at G = 0.1",
         fmt("n_ins/n_ss = %.5f, pi kappa/(4|G|) = %.5f, rel dev %.4f (tol 0.25)", ratio, factor,
             ratio / factor - 1.0));

  const double elapsed = seconds_since(start);
  report("2c", elapsed < 30.0, "runtime", fmt("%.2f s (limit 30 s)", elapsed));
}

void criterion_3() {
  const SystemParams p = fig1(0.3);
  const auto g = linspace(0.01, 0.45, 200);
  const auto t = linspace(0.0, 40.0, 800);
  const auto start = Clock::now();
  const SweepGrid grid = sweep_time_g(p, g, t, Mode::kZeroTemp);
  const double elapsed = seconds_since(start);

  const double t_opt = std::sqrt(10.0) * pi / 2.0;
  double cell_min = INFINITY;
  double at_g = 0.0, at_t = 0.0;
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      if (std::abs(g[j] - 0.3) > 0.01 || std::abs(t[i] - t_opt) > 0.25) continue;
      if (grid.at(i, j) < cell_min) {
        cell_min = grid.at(i, j);
        at_g = g[j];
        at_t = t[i];
      }
    }
  }
  const double refined = extract_n_ins(p, Mode::kZeroTemp).n_min;
  report("3a", cell_min < 1e-3 && refined < 1e-3,
         "zero-temperature minimum near (G, t) = (0.3, sqrt(10) pi/2) below 1e-3",
         fmt("grid min %.4e at (%.4f, %.4f); refined min at G = 0.3: %.4e", cell_min, at_g, at_t,
             refined));

  const double unmatched = extract_n_ins(fig1(0.35), Mode::kZeroTemp).n_min;
  report("3b", unmatched > 1e-2, "zero-temperature windowed minimum at G = 0.35 above 1e-2",
         fmt("%.4e", unmatched));

  std::vector<double> q1;
  for (const auto& s : island_catalog(9))
    if (s.q == 1) q1.push_back(s.g_opt);
  std::sort(q1.rbegin(), q1.rend());
  const std::vector<double> expected{3.0 / 10.0, 5.0 / 26.0, 7.0 / 50.0, 9.0 / 82.0};
  report("3c", q1 == expected, "q = 1 island optima equal pq/(p^2+q^2)",
         fmt("%.6f %.6f %.6f %.6f", q1.size() > 0 ? q1[0] : NAN, q1.size() > 1 ? q1[1] : NAN,
             q1.size() > 2 ? q1[2] : NAN, q1.size() > 3 ? q1[3] : NAN));

  report("3d", elapsed < 120.0, "runtime of 200 x 800 zero-temperature sweep",
         fmt("%.2f s (limit 120 s)", elapsed));
}

void criterion_4() {
  const std::vector<double> matched{0.14, 0.19, 0.3};
  for (std::size_t k = 0; k < matched.size(); ++k) {
    const double g = matched[k];
    const std::vector<double> gs{g - 0.02, g, g + 0.02};
    const LimitCurve c = limit_curve_vs_g(fig1(0.1), gs, Mode::kZeroTemp);
    const auto& mid = c.points[1];
    const double ratio = mid.numeric_min / mid.n_ins_zero_temp;
    report(fmt("4%c", 'a' + static_cast<int>(2 * k)), std::abs(ratio - 1.0) < 0.30,
           fmt("zero-temperature minimum vs pi kappa |G|/[8(1-4G^2)] at G = %.2f", g),
           fmt("numeric %.4e, analytic %.4e, ratio %.4f (tol 0.30)", mid.numeric_min,
               mid.n_ins_zero_temp, ratio));
    const bool dip =
        mid.numeric_min < c.points[0].numeric_min && mid.numeric_min < c.points[2].numeric_min;
    report(fmt("4%c", 'b' + static_cast<int>(2 * k)), dip,
           fmt("local minimum of the limit curve at G = %.2f (+-0.02)", g),
           fmt("%.4e | %.4e | %.4e", c.points[0].numeric_min, mid.numeric_min,
               c.points[2].numeric_min));
  }
}

void criterion_5() {
  const double matched = extract_n_ins(fig1(0.3), Mode::kFull).n_min;
  report("5a", matched < 1e-1, "finite-temperature windowed minimum at G = 0.3 below 1e-1",
         fmt("%.4e", matched));
  const double unmatched = extract_n_ins(fig1(0.35), Mode::kFull).n_min;
  report("5b", unmatched > 1e1, "finite-temperature windowed minimum at G = 0.35 above 1e1",
         fmt("%.4e", unmatched));
}

void criterion_6() {
  int mismatches = 0;
  std::size_t count = 0;
  for (double g : linspace(0.001, 0.498, 498)) {
    const SystemParams p = fig1(g);
    if (n_ins_bounds(p).lower != n_ins_rwa(p).limit + n_ins_zero_temp(p).limit) ++mismatches;
    ++count;
  }
  report("6a", mismatches == 0, "matched bound equals RWA limit + zero-temperature limit exactly",
         fmt("%d mismatches over %zu coupling values", mismatches, count));
  const double lower = n_ins_bounds(fig1(0.3)).lower;
  report("6b", std::abs(lower - 0.02802) < 1e-6, "matched bound at G = 0.3 equals 0.02802",
         fmt("%.8f (tol 1e-6)", lower));
}

void oracle_line(const std::string& id, const FockConfig& cfg, double t_end) {
  SystemParams p;
  p.G = 0.2;
  p.kappa = 0.1;
  p.gamma = 1e-3;
  p.n_th = 1.0;
  p.delta_prime = -1.0;
  const auto times = linspace(0.0, t_end, 101);
  CompareOptions opt;
  opt.throw_on_leak = false;
  const auto start = Clock::now();
  const OracleReport r = compare(p, cfg, times, 1e-3, opt);
  const double elapsed = seconds_since(start);
  const bool ok = r.max_abs_dev < 1e-3 && r.trace_drift < 1e-9 && r.leak_max < 1e-6 && elapsed < 300.0;
  report(id, ok, fmt("Fock oracle vs moment engine, dims %d x %d, t in [0, %g]", cfg.dim_a, cfg.dim_b, t_end),
         fmt("max|dev| %.3e (tol 1e-3), trace drift %.2e (tol 1e-9), leak %.3e (tol 1e-6), "
             "step halving dev %.2e, %.1f s (limit 300 s)",
             r.max_abs_dev, r.trace_drift, r.leak_max, r.halving_dev, elapsed));
}

void criterion_7() { oracle_line("7a", {12, 12, 1e-6, 400}, 50.0); }

void criterion_8() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  std::string first;
  for (int draw = 0; draw < 10000; ++draw) {
    const SystemParams p = testing::random_params(rng);
    const std::vector<double> times{0.0, 1e3 * u(rng)};
    const Trajectory tr = propagate(build_matrices(p), initial_vector(p.n_th), times);
    if (const auto bad = tr.states.back().invariant_violation()) {
      if (violations++ == 0) first = *bad;
    }
  }
  report("8a", violations == 0, "hermitian pairs, realness and nonnegativity over 10000 random draws",
         fmt("%d violations%s%s", violations, violations ? ", first: " : "", first.c_str()));

  int entry_mismatch = 0;
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const SystemParams p = testing::random_params(rng);
    const MomentMatrices mm = build_matrices(p);
    const auto printed = testing::printed_table(p);
    for (int r = 0; r < 10; ++r) {
      for (int c = 0; c < 10; ++c) {
        const double d = std::abs(mm.m(r, c) - printed.m(r, c));
        worst = std::max(worst, d);
        if (d > 1e-14) ++entry_mismatch;
      }
      const double d = std::abs(mm.n(r) - printed.n(r));
      worst = std::max(worst, d);
      if (d > 1e-14) ++entry_mismatch;
    }
  }
  report("8b", entry_mismatch == 0, "generated drift matrix and drive match the printed table",
         fmt("%d mismatched entries over 1000 draws, worst |diff| %.2e", entry_mismatch, worst));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optocool acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8); default runs all")
      ->check(CLI::Range(0, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<void()>> all{criterion_1, criterion_2, criterion_3, criterion_4,
                                               criterion_5, criterion_6, criterion_7, criterion_8};
  int failed_criteria = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (only != 0 && only != id) continue;
    const int before = failures;
    try {
      all[k]();
    } catch (const std::exception& e) {
      std::printf("FAIL  error: %s\n", e.what());
      ++failures;
    }
    const bool pass = failures == before;
    if (!pass) ++failed_criteria;
    std::printf("%s  criterion %d\n", pass ? "PASS" : "FAIL", id);
    std::fflush(stdout);
  }
  return failed_criteria == 0 ? 0 : 1;
}
