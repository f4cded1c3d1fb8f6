#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optocool/moments.hpp"
#include "optocool/params.hpp"

namespace optocool {

/// Which dynamics produce N_b(t).
enum class Mode {
  kFull,      // ten-moment equations
  kRwa,       // three-moment rotating-wave equations
  kZeroTemp,  // ten-moment equations with n_th forced to 0
};

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Parameters actually propagated for a mode (zero_temp clears n_th).
SystemParams effective_params(const SystemParams& params, Mode mode);

/// Exact N_b(t) for one parameter point. Optionally follows a kappa(t)
/// schedule (full and zero_temp modes only).
class NbEvaluator {
 public:
  NbEvaluator(const SystemParams& params, Mode mode,
              std::optional<KappaSchedule> schedule = std::nullopt);

  double operator()(double t) const;
  std::vector<double> sample(std::span<const double> times) const;

  const SystemParams& params() const { return params_; }
  Mode mode() const { return mode_; }

 private:
  SystemParams params_;
  Mode mode_;
  std::optional<KappaSchedule> schedule_;
  MomentMatrices matrices_;
};

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// values(i, j): axis1 = time (rows), axis2 = coupling |G| (columns).
struct SweepGrid {
  Axis axis1;
  Axis axis2;
  Mode mode = Mode::kFull;
  SystemParams params_base;
  std::vector<double> values;  // row-major, axis1.size() x axis2.size()

  double at(std::size_t i, std::size_t j) const { return values[i * axis2.values.size() + j]; }
  std::size_t rows() const { return axis1.values.size(); }
  std::size_t cols() const { return axis2.values.size(); }
};

struct GridCell {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

struct SweepOptions {
  int jobs = 1;
};

/// Linearly spaced values start..stop inclusive (count >= 1).
std::vector<double> linspace(double start, double stop, std::size_t count);

/// One propagation per coupling value, sampled on t_values. The phase of
/// params_base.G is kept; only its magnitude is swept. A failing column
/// aborts the sweep with the offending coupling in the message.
SweepGrid sweep_time_g(const SystemParams& params_base, std::span<const double> g_values,
                       std::span<const double> t_values, Mode mode,
                       const SweepOptions& options = {});

/// Interior cells strictly below all eight neighbours, ascending by value.
std::vector<GridCell> local_minima(const SweepGrid& grid);

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// [0.5, 1.5] pi/(w+ - w-) for full/zero_temp, [0.5, 1.5] pi/(2|G|) for rwa.
TimeWindow default_window(const SystemParams& params, Mode mode);

struct ExtractOptions {
  std::optional<TimeWindow> window;
  double coarse_dt = 0.01;
  double tolerance = 1e-4;
  std::optional<KappaSchedule> schedule;
};

struct MinimumResult {
  double n_min = 0.0;
  double t_min = 0.0;
  double coarse_min = 0.0;
  TimeWindow window;
};

/// Global minimum of N_b over the window: uniform coarse grid, then golden
/// section on the bracket around the best coarse sample. Never returns more
/// than the coarse minimum. Throws WindowEmpty for an empty or invalid window.
MinimumResult extract_n_ins(const SystemParams& params, Mode mode,
                            const ExtractOptions& options = {});

/// Golden-section minimisation of a unimodal-on-[lo, hi] function to an
/// interval width of `tolerance`; returns (x, f(x)).
std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f,
                                                  double lo, double hi, double tolerance);

struct LimitPoint {
  double abscissa = 0.0;
  double numeric_min = 0.0;
  double t_min = 0.0;
  double n_ins_rwa = 0.0;        // pi gamma n_th / (4|G|)
  double n_ins_zero_temp = 0.0;  // pi kappa |G| / [8(omega_m² - 4|G|²)]
  double bound_unmatched = 0.0;
  double bound_matched = 0.0;
};

struct LimitCurve {
  std::string abscissa_name;
  Mode mode = Mode::kFull;
  bool modulated = false;
  SystemParams params_base;
  std::vector<LimitPoint> points;
};

struct LimitOptions {
  int jobs = 1;
  double coarse_dt = 0.01;
  double tolerance = 1e-4;
  std::optional<KappaSchedule> schedule;  // set => modulated curve
};

/// Numeric instantaneous limit per |G| in (0, 0.499 omega_m) with the
/// closed-form references alongside.
LimitCurve limit_curve_vs_g(const SystemParams& params_base, std::span<const double> g_values,
                            Mode mode, const LimitOptions& options = {});

LimitCurve limit_curve_vs_kappa(const SystemParams& params_base,
                                std::span<const double> kappa_values, Mode mode,
                                const LimitOptions& options = {});

}  // namespace optocool
