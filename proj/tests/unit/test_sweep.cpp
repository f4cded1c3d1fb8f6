#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "optocool/error.hpp"
#include "optocool/moments.hpp"
#include "optocool/rwa.hpp"
#include "optocool/spectrum.hpp"
#include "optocool/sweep.hpp"
#include "reference.hpp"

namespace optocool {
namespace {

using std::numbers::pi;
using testing::fig1_params;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no optocool::Error thrown";
  return ErrorKind::kIo;
}

TEST(Mode, ParseRoundTrip) {
  for (Mode m : {Mode::kFull, Mode::kRwa, Mode::kZeroTemp}) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_EQ(kind_of([] { parse_mode("cold"); }), ErrorKind::kInvalidParams);
}

TEST(Linspace, Endpoints) {
  const auto xs = linspace(0.0, 1.0, 11);
  EXPECT_EQ(xs.front(), 0.0);
  EXPECT_EQ(xs.back(), 1.0);
  EXPECT_EQ(linspace(2.0, 5.0, 1), std::vector<double>{2.0});
  EXPECT_EQ(kind_of([] { linspace(0.0, 1.0, 0); }), ErrorKind::kInvalidParams);
}

TEST(SweepTimeG, SingleCellEqualsPropagate) {
  const SystemParams p = fig1_params(0.1);
  const std::vector<double> g{0.17};
  const std::vector<double> t{3.5};
  const SweepGrid grid = sweep_time_g(p, g, t, Mode::kFull);
  ASSERT_EQ(grid.rows(), 1u);
  ASSERT_EQ(grid.cols(), 1u);
  const std::vector<double> times{0.0, 3.5};
  const double direct =
      propagate(build_matrices(p.with_g(0.17)), initial_vector(p.n_th), times).n_b.back();
  EXPECT_NEAR(grid.at(0, 0), direct, 1e-12 * p.n_th);
}

TEST(SweepTimeG, RwaDipsFollowOddHalfCycles) {
  const SystemParams p = fig1_params(0.1);
  const std::vector<double> g{0.05, 0.1, 0.15};
  const auto t = linspace(0.0, 160.0, 16001);
  const SweepGrid grid = sweep_time_g(p, g, t, Mode::kRwa);
  for (std::size_t j = 0; j < g.size(); ++j) {
    int k = 0;
    for (std::size_t i = 1; i + 1 < grid.rows() && k < 3; ++i) {
      if (grid.at(i, j) < grid.at(i - 1, j) && grid.at(i, j) <= grid.at(i + 1, j)) {
        // Damping shifts the dip phase by about atan(kappa/(4|G|)).
        const double expected = (2 * k + 1) * pi / (2.0 * g[j]);
        const double shift = std::atan(p.kappa / (4.0 * g[j])) / ((2 * k + 1) * pi / 2.0);
        EXPECT_NEAR(t[i] / expected, 1.0, 1.2 * shift + 1e-3) << "G " << g[j] << " dip " << k;
        ++k;
      }
    }
    EXPECT_EQ(k, 3) << g[j];
  }
}

TEST(SweepTimeG, ZeroTemperatureIslandAtThreeOne) {
  const SystemParams p = fig1_params(0.3);
  const auto g = linspace(0.25, 0.35, 21);
  const auto t = linspace(3.5, 6.5, 301);
  const SweepGrid grid = sweep_time_g(p, g, t, Mode::kZeroTemp);
  const auto minima = local_minima(grid);
  ASSERT_FALSE(minima.empty());
  const GridCell best = minima.front();
  EXPECT_NEAR(g[best.j], 0.3, 0.0051);
  EXPECT_NEAR(t[best.i], std::sqrt(10.0) * pi / 2.0, 0.02);
  EXPECT_LT(best.value, 2e-3);
  for (double v : grid.values) EXPECT_GE(v, best.value);
}

TEST(SweepTimeG, FullAtZeroTemperatureEqualsZeroTempMode) {
  const SystemParams p = fig1_params(0.2).with_n_th(0.0);
  const auto g = linspace(0.1, 0.4, 7);
  const auto t = linspace(0.0, 30.0, 61);
  const SweepGrid a = sweep_time_g(p, g, t, Mode::kFull);
  const SweepGrid b = sweep_time_g(p, g, t, Mode::kZeroTemp);
  EXPECT_EQ(a.values, b.values);
}

TEST(SweepTimeG, DeterministicAcrossWorkerCounts) {
  const SystemParams p = fig1_params(0.2);
  const auto g = linspace(0.01, 0.45, 23);
  const auto t = linspace(0.0, 40.0, 81);
  const SweepGrid one = sweep_time_g(p, g, t, Mode::kFull, {1});
  const SweepGrid many = sweep_time_g(p, g, t, Mode::kFull, {4});
  EXPECT_EQ(one.values, many.values);
}

TEST(SweepTimeG, FailedCellAbortsWithContext) {
  const SystemParams p = fig1_params(0.2);
  const std::vector<double> g{0.1, 5.0};
  const std::vector<double> t{0.0, 1e3};
  try {
    sweep_time_g(p, g, t, Mode::kFull);
    FAIL() << "overflowing column was not reported";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("|G| = 5"), std::string::npos) << e.what();
  }
}

TEST(SweepTimeG, RejectsEmptyAxes) {
  const std::vector<double> none;
  const std::vector<double> t{0.0, 1.0};
  EXPECT_EQ(kind_of([&] { sweep_time_g(fig1_params(0.1), none, t, Mode::kFull); }),
            ErrorKind::kInvalidParams);
}

TEST(LocalMinima, StrictInteriorOnly) {
  SweepGrid grid;
  grid.axis1.values = {0, 1, 2};
  grid.axis2.values = {0, 1, 2};
  grid.values = {5, 5, 5, 5, 1, 5, 5, 5, 5};
  auto m = local_minima(grid);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].i, 1u);
  EXPECT_EQ(m[0].value, 1.0);
  grid.values[0] = 1.0;
  EXPECT_TRUE(local_minima(grid).empty());
}

TEST(ExtractNIns, RwaMatchesThermalLimit) {
  const SystemParams p = fig1_params(0.1);
  const MinimumResult r = extract_n_ins(p, Mode::kRwa);
  EXPECT_NEAR(r.n_min / n_ins_rwa(p).limit, 1.0, 0.10);
  EXPECT_NEAR(r.n_min, 7.9e-2, 0.1 * 7.9e-2);
  EXPECT_GE(r.t_min, r.window.lo);
  EXPECT_LE(r.t_min, r.window.hi);
}

TEST(ExtractNIns, RefinementNeverWorseThanCoarse) {
  for (double g : {0.07, 0.14, 0.23, 0.3, 0.41}) {
    for (Mode m : {Mode::kFull, Mode::kRwa, Mode::kZeroTemp}) {
      const MinimumResult r = extract_n_ins(fig1_params(g), m);
      EXPECT_LE(r.n_min, r.coarse_min) << g;
      EXPECT_GE(r.n_min, 0.0);
    }
  }
}

TEST(ExtractNIns, UnmatchedFullModelIsBackactionDominated) {
  const MinimumResult r = extract_n_ins(fig1_params(0.35), Mode::kFull);
  EXPECT_GT(r.n_min, 1e1);
  EXPECT_LT(r.n_min, 1e3);
}

TEST(ExtractNIns, WindowValidation) {
  ExtractOptions opt;
  opt.window = TimeWindow{5.0, 5.0};
  EXPECT_EQ(kind_of([&] { extract_n_ins(fig1_params(0.1), Mode::kFull, opt); }),
            ErrorKind::kWindowEmpty);
  opt.window = TimeWindow{-1.0, 5.0};
  EXPECT_EQ(kind_of([&] { extract_n_ins(fig1_params(0.1), Mode::kFull, opt); }),
            ErrorKind::kWindowEmpty);
  EXPECT_EQ(kind_of([] { extract_n_ins(fig1_params(0.0), Mode::kFull); }),
            ErrorKind::kWindowEmpty);
}

TEST(GoldenSection, FindsParabolaVertex) {
  const auto [x, fx] = golden_section_minimize([](double t) { return (t - 1.3) * (t - 1.3) + 2.0; },
                                               0.0, 4.0, 1e-8);
  EXPECT_NEAR(x, 1.3, 1e-7);
  EXPECT_NEAR(fx, 2.0, 1e-14);
}

TEST(LimitCurveVsG, RwaCurveDecreasesWithCoupling) {
  const auto g = linspace(0.03, 0.2, 18);
  const LimitCurve c = limit_curve_vs_g(fig1_params(0.1), g, Mode::kRwa);
  ASSERT_EQ(c.points.size(), g.size());
  for (std::size_t k = 1; k < c.points.size(); ++k)
    EXPECT_LT(c.points[k].numeric_min, c.points[k - 1].numeric_min) << g[k];
  for (const auto& pt : c.points) EXPECT_NEAR(pt.numeric_min / pt.n_ins_rwa, 1.0, 0.10);
}

TEST(LimitCurveVsG, ReferencesAttached) {
  const std::vector<double> g{0.3};
  const LimitCurve c = limit_curve_vs_g(fig1_params(0.1), g, Mode::kFull);
  const auto& pt = c.points.front();
  const SystemParams p = fig1_params(0.3);
  EXPECT_EQ(pt.n_ins_rwa, n_ins_rwa(p).limit);
  EXPECT_EQ(pt.n_ins_zero_temp, n_ins_zero_temp(p).limit);
  EXPECT_EQ(pt.bound_matched, pt.n_ins_rwa + pt.n_ins_zero_temp);
  EXPECT_EQ(pt.bound_unmatched, n_ins_bounds(p).upper);
  EXPECT_FALSE(c.modulated);
}

TEST(LimitCurveVsG, FullCurveAgainstBoundsAtMatchedPoints) {
  const std::vector<double> g{0.14, 5.0 / 26.0, 0.3};
  const LimitCurve c = limit_curve_vs_g(fig1_params(0.1), g, Mode::kFull);
  for (const auto& pt : c.points) EXPECT_GE(pt.numeric_min, pt.bound_matched) << pt.abscissa;
  EXPECT_LE(c.points.back().numeric_min, c.points.back().bound_unmatched);
}

TEST(LimitCurveVsG, RejectsOutOfRangeCoupling) {
  const std::vector<double> zero{0.0};
  const std::vector<double> half{0.5};
  const std::vector<double> none;
  EXPECT_EQ(kind_of([&] { limit_curve_vs_g(fig1_params(0.1), zero, Mode::kFull); }),
            ErrorKind::kInvalidParams);
  EXPECT_EQ(kind_of([&] { limit_curve_vs_g(fig1_params(0.1), half, Mode::kFull); }),
            ErrorKind::kBackactionDivergence);
  EXPECT_EQ(kind_of([&] { limit_curve_vs_g(fig1_params(0.1), none, Mode::kFull); }),
            ErrorKind::kInvalidParams);
}

TEST(LimitCurveVsKappa, MonotoneInCavityDecay) {
  std::vector<double> kappa;
  for (int e = 0; e <= 8; ++e) kappa.push_back(1e-3 * std::pow(50.0, e / 8.0));
  const LimitCurve c = limit_curve_vs_kappa(fig1_params(0.3), kappa, Mode::kFull, {2});
  for (std::size_t k = 1; k < c.points.size(); ++k)
    EXPECT_GE(c.points[k].numeric_min, c.points[k - 1].numeric_min) << kappa[k];
}

TEST(LimitCurveVsKappa, MatchedBoundIsAffineInKappa) {
  const auto kappa = linspace(0.001, 0.05, 5);
  const LimitCurve c = limit_curve_vs_kappa(fig1_params(0.3), kappa, Mode::kFull);
  for (std::size_t k = 2; k < c.points.size(); ++k) {
    const double second = c.points[k].bound_matched - 2.0 * c.points[k - 1].bound_matched +
                          c.points[k - 2].bound_matched;
    EXPECT_NEAR(second, 0.0, 1e-15);
  }
}

TEST(LimitCurveVsKappa, KappaEqualToGammaStillRuns) {
  const SystemParams p = fig1_params(0.3);
  const std::vector<double> kappa{p.gamma};
  const LimitCurve c = limit_curve_vs_kappa(p, kappa, Mode::kFull);
  EXPECT_TRUE(std::isfinite(c.points.front().numeric_min));
}

TEST(LimitCurve, ScheduleMarksCurveModulated) {
  LimitOptions opt;
  opt.schedule = KappaSchedule({{0.0, 3.0, 0.01}, {3.0, 100.0, 0.05}});
  const std::vector<double> g{0.3};
  const LimitCurve c = limit_curve_vs_g(fig1_params(0.1), g, Mode::kFull, opt);
  EXPECT_TRUE(c.modulated);
  const LimitCurve plain = limit_curve_vs_g(fig1_params(0.1), g, Mode::kFull);
  EXPECT_NE(c.points.front().numeric_min, plain.points.front().numeric_min);
}

}  // namespace
}  // namespace optocool
