#include "optocool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "optocool/affine_flow.hpp"
#include "optocool/error.hpp"
#include "optocool/parallel.hpp"
#include "optocool/rwa.hpp"
#include "optocool/spectrum.hpp"

namespace optocool {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kFull: return "full";
    case Mode::kRwa: return "rwa";
    case Mode::kZeroTemp: return "zero_temp";
  }
  return "full";
}

Mode parse_mode(std::string_view text) {
  if (text == "full") return Mode::kFull;
  if (text == "rwa") return Mode::kRwa;
  if (text == "zero_temp") return Mode::kZeroTemp;
  throw Error(ErrorKind::kInvalidParams, "unknown mode '" + std::string(text) +
                                             "' (expected full, rwa or zero_temp)");
}

SystemParams effective_params(const SystemParams& params, Mode mode) {
  return mode == Mode::kZeroTemp ? params.with_n_th(0.0) : params;
}

NbEvaluator::NbEvaluator(const SystemParams& params, Mode mode,
                         std::optional<KappaSchedule> schedule)
    : params_(effective_params(params, mode)), mode_(mode), schedule_(std::move(schedule)) {
  params_.validate_dynamics();
  if (schedule_ && mode_ == Mode::kRwa) {
    throw Error(ErrorKind::kInvalidParams, "kappa schedules apply to full and zero_temp modes only");
  }
  if (mode_ != Mode::kRwa) matrices_ = build_matrices(params_);
}

std::vector<double> NbEvaluator::sample(std::span<const double> times) const {
  if (mode_ == Mode::kRwa) {
    return propagate_rwa(params_, rwa_initial_state(params_.n_th), times).n_b;
  }
  const MomentVector v0 = initial_vector(params_.n_th);
  if (schedule_) return propagate_modulated(params_, *schedule_, v0, times).n_b;
  return propagate(matrices_, v0, times).n_b;
}

double NbEvaluator::operator()(double t) const {
  const double times[] = {t};
  return sample(times).front();
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) throw Error(ErrorKind::kInvalidParams, "linspace needs count >= 1");
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

namespace {

cplx with_magnitude(cplx phase_source, double magnitude) {
  const double r = std::abs(phase_source);
  return r > 0.0 ? phase_source / r * magnitude : cplx(magnitude, 0.0);
}

std::string describe(double g) {
  std::ostringstream os;
  os.precision(17);
  os << g;
  return os.str();
}

}  // namespace

SweepGrid sweep_time_g(const SystemParams& params_base, std::span<const double> g_values,
                       std::span<const double> t_values, Mode mode, const SweepOptions& options) {
  params_base.validate_dynamics();
  if (g_values.empty()) throw Error(ErrorKind::kInvalidParams, "coupling axis is empty");
  for (double g : g_values) {
    if (!std::isfinite(g) || g < 0.0) {
      throw Error(ErrorKind::kInvalidParams, "coupling values must be finite and >= 0");
    }
  }
  require_time_grid(t_values);

  SweepGrid grid;
  grid.axis1 = {"t", "1/omega_m", {t_values.begin(), t_values.end()}};
  grid.axis2 = {"G", "omega_m", {g_values.begin(), g_values.end()}};
  grid.mode = mode;
  grid.params_base = params_base;
  grid.values.assign(t_values.size() * g_values.size(), 0.0);

  const std::size_t cols = g_values.size();
  parallel_for(cols, options.jobs, [&](std::size_t j) {
    try {
      const NbEvaluator eval(params_base.with_g(with_magnitude(params_base.G, g_values[j])), mode);
      const std::vector<double> column = eval.sample(t_values);
      for (std::size_t i = 0; i < column.size(); ++i) {
        if (!std::isfinite(column[i])) {
          throw Error(ErrorKind::kSingularPropagation,
                      "non-finite N_b at t = " + describe(t_values[i]));
        }
        grid.values[i * cols + j] = column[i];
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "sweep column |G| = " + describe(g_values[j]) + " (mode " +
                                std::string(to_string(mode)) + "): " + e.what());
    }
  });
  return grid;
}

std::vector<GridCell> local_minima(const SweepGrid& grid) {
  std::vector<GridCell> out;
  const std::size_t rows = grid.rows();
  const std::size_t cols = grid.cols();
  if (rows < 3 || cols < 3) return out;
  for (std::size_t i = 1; i + 1 < rows; ++i) {
    for (std::size_t j = 1; j + 1 < cols; ++j) {
      const double v = grid.at(i, j);
      bool lowest = true;
      for (int di = -1; di <= 1 && lowest; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (!(v < grid.at(i + di, j + dj))) {
            lowest = false;
            break;
          }
        }
      }
      if (lowest) out.push_back({i, j, v});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GridCell& a, const GridCell& b) { return a.value < b.value; });
  return out;
}

TimeWindow default_window(const SystemParams& params, Mode mode) {
  const double g = std::abs(params.G);
  if (g == 0.0) throw Error(ErrorKind::kWindowEmpty, "no Rabi cycle for G = 0");
  const double half_cycle = mode == Mode::kRwa ? std::numbers::pi / (2.0 * g)
                                               : std::numbers::pi / eigenfrequencies(g, params.omega_m).diff;
  return {0.5 * half_cycle, 1.5 * half_cycle};
}

std::pair<double, double> golden_section_minimize(const std::function<double(double)>& f,
                                                  double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

MinimumResult extract_n_ins(const SystemParams& params, Mode mode, const ExtractOptions& options) {
  const TimeWindow w = options.window ? *options.window : default_window(params, mode);
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || w.lo < 0.0 || !(w.hi > w.lo)) {
    throw Error(ErrorKind::kWindowEmpty, "search window [" + describe(w.lo) + ", " +
                                             describe(w.hi) + "] is empty or invalid");
  }
  if (!(options.coarse_dt > 0.0) || !(options.tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidParams, "coarse_dt and tolerance must be > 0");
  }
  const NbEvaluator eval(params, mode, options.schedule);

  const auto n = static_cast<std::size_t>(std::ceil((w.hi - w.lo) / options.coarse_dt)) + 1;
  const std::vector<double> ts = linspace(w.lo, w.hi, std::max<std::size_t>(n, 3));
  const std::vector<double> vals = eval.sample(ts);
  const auto k = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());

  MinimumResult r;
  r.window = w;
  r.coarse_min = vals[k];
  r.n_min = vals[k];
  r.t_min = ts[k];
  const double a = ts[k == 0 ? 0 : k - 1];
  const double b = ts[std::min(k + 1, ts.size() - 1)];
  const auto [t_ref, v_ref] =
      golden_section_minimize([&eval](double t) { return eval(t); }, a, b, options.tolerance);
  if (v_ref < r.n_min) {
    r.n_min = v_ref;
    r.t_min = t_ref;
  }
  return r;
}

namespace {

LimitPoint limit_point(const SystemParams& p, Mode mode, const LimitOptions& options,
                       double abscissa) {
  ExtractOptions ex;
  ex.coarse_dt = options.coarse_dt;
  ex.tolerance = options.tolerance;
  ex.schedule = options.schedule;
  const MinimumResult m = extract_n_ins(p, mode, ex);
  const SystemParams eff = effective_params(p, mode);
  const LimitBounds bounds = n_ins_bounds(eff);
  LimitPoint pt;
  pt.abscissa = abscissa;
  pt.numeric_min = m.n_min;
  pt.t_min = m.t_min;
  pt.n_ins_rwa = n_ins_rwa(eff).limit;
  pt.n_ins_zero_temp = n_ins_zero_temp(eff).limit;
  pt.bound_unmatched = bounds.upper;
  pt.bound_matched = bounds.lower;
  return pt;
}

void require_nonempty(std::span<const double> xs, const char* what) {
  if (xs.empty()) throw Error(ErrorKind::kInvalidParams, std::string(what) + " range is empty");
}

}  // namespace

LimitCurve limit_curve_vs_g(const SystemParams& params_base, std::span<const double> g_values,
                            Mode mode, const LimitOptions& options) {
  params_base.validate();
  require_nonempty(g_values, "coupling");
  for (double g : g_values) {
    if (!std::isfinite(g) || g <= 0.0) {
      throw Error(ErrorKind::kInvalidParams, "coupling values must lie in (0, 0.499) omega_m");
    }
    eigenfrequencies(g, params_base.omega_m);  // divergence guard
  }
  LimitCurve curve;
  curve.abscissa_name = "G";
  curve.mode = mode;
  curve.modulated = options.schedule.has_value();
  curve.params_base = params_base;
  curve.points.resize(g_values.size());
  parallel_for(g_values.size(), options.jobs, [&](std::size_t k) {
    const SystemParams p = params_base.with_g(with_magnitude(params_base.G, g_values[k]));
    curve.points[k] = limit_point(p, mode, options, g_values[k]);
  });
  return curve;
}

LimitCurve limit_curve_vs_kappa(const SystemParams& params_base,
                                std::span<const double> kappa_values, Mode mode,
                                const LimitOptions& options) {
  params_base.validate();
  require_nonempty(kappa_values, "kappa");
  for (double k : kappa_values) {
    if (!std::isfinite(k) || k <= 0.0) throw Error(ErrorKind::kInvalidParams, "kappa values must be > 0");
  }
  eigenfrequencies(std::abs(params_base.G), params_base.omega_m);
  LimitCurve curve;
  curve.abscissa_name = "kappa";
  curve.mode = mode;
  curve.modulated = options.schedule.has_value();
  curve.params_base = params_base;
  curve.points.resize(kappa_values.size());
  parallel_for(kappa_values.size(), options.jobs, [&](std::size_t k) {
    curve.points[k] = limit_point(params_base.with_kappa(kappa_values[k]), mode, options, kappa_values[k]);
  });
  return curve;
}

}  // namespace optocool
