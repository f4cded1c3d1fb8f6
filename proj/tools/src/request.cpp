#include "request.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "optocool/error.hpp"
#include "optocool/io.hpp"
#include "optocool/oracle.hpp"
#include "optocool/rwa.hpp"
#include "optocool/spectrum.hpp"
#include "optocool/sweep.hpp"

#ifndef OPTOCOOL_VERSION
#define OPTOCOOL_VERSION "unknown"
#endif

namespace optocool::cli {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("manifest field '") + key + "' is missing");
  return j.at(key);
}

std::vector<double> axis_values(const json& axis) {
  return linspace(axis.at("start").get<double>(), axis.at("stop").get<double>(),
                  axis.at("count").get<std::size_t>());
}

// Conversions for --si output: times in seconds, rates in Hz.
struct Units {
  double time = 1.0;  // seconds per 1/omega_m
  double rate = 1.0;  // Hz per omega_m
  std::string time_name = "1/omega_m";
  std::string rate_name = "omega_m";
};

Units units_for(const Request& r) {
  Units u;
  if (!r.si) return u;
  const double f = *r.mechanical_frequency_hz;
  u.time = 1.0 / (2.0 * std::numbers::pi * f);
  u.rate = f;
  u.time_name = "s";
  u.rate_name = "Hz";
  return u;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_csv(const std::string& dir, const std::string& name, const auto& writer,
               std::vector<std::string>& outputs) {
  std::ostringstream os;
  writer(os);
  io::write_text_file(path_in(dir, name), os.str());
  outputs.push_back(name);
}

std::string gnuplot_header(const std::string& xlabel, const std::string& ylabel) {
  return "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" + xlabel +
         "'\nset ylabel '" + ylabel + "'\n";
}

std::string describe_min(std::span<const double> x, std::span<const double> y, const char* what) {
  const auto it = std::min_element(y.begin(), y.end());
  const auto k = static_cast<std::size_t>(it - y.begin());
  std::ostringstream os;
  os << "min " << what << " = " << io::format_double(*it) << " at " << io::format_double(x[k]);
  return os.str();
}

RunResult run_evolve(const Request& r, const std::string& dir, const Units& u) {
  const Mode mode = parse_mode(r.settings.at("mode").get<std::string>());
  const std::vector<double> times =
      linspace(0.0, r.settings.at("t_max").get<double>(), r.settings.at("samples").get<std::size_t>());
  RunResult res;
  std::vector<double> scaled(times.size());
  std::transform(times.begin(), times.end(), scaled.begin(), [&](double t) { return t * u.time; });

  if (mode == Mode::kRwa) {
    if (r.schedule) throw UsageError("--kappa-schedule is not supported with --mode rwa");
    RwaTrajectory tr = propagate_rwa(r.params, rwa_initial_state(r.params.n_th), times);
    tr.times = scaled;
    write_csv(dir, "trajectory.csv", [&](std::ostream& os) { io::write_rwa_csv(os, tr); }, res.outputs);
    res.summary = describe_min(tr.times, tr.n_b, "n_b");
  } else {
    const SystemParams p = effective_params(r.params, mode);
    Trajectory tr = r.schedule ? propagate_modulated(p, *r.schedule, initial_vector(p.n_th), times)
                               : propagate(build_matrices(p), initial_vector(p.n_th), times);
    tr.times = scaled;
    write_csv(dir, "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, tr); },
              res.outputs);
    res.summary = describe_min(tr.times, tr.n_b, "n_b");
  }
  if (r.gnuplot_stub) {
    io::write_text_file(path_in(dir, "plot.gp"),
                        gnuplot_header("t [" + u.time_name + "]", "n_b") +
                            "set logscale y\nplot 'trajectory.csv' using 1:2 with lines\n");
    res.outputs.push_back("plot.gp");
  }
  return res;
}

RunResult run_sweep(const Request& r, const std::string& dir, const Units& u, int jobs) {
  if (r.schedule) throw UsageError("--kappa-schedule is not supported by sweep");
  const Mode mode = parse_mode(r.settings.at("mode").get<std::string>());
  const std::vector<double> g = axis_values(r.settings.at("g"));
  const std::vector<double> t = axis_values(r.settings.at("t"));
  SweepGrid grid = sweep_time_g(r.params, g, t, mode, SweepOptions{jobs});
  for (double& x : grid.axis1.values) x *= u.time;
  for (double& x : grid.axis2.values) x *= u.rate;
  grid.axis1.unit = u.time_name;
  grid.axis2.unit = u.rate_name;

  RunResult res;
  write_csv(dir, "grid.csv", [&](std::ostream& os) { io::write_grid_csv(os, grid); }, res.outputs);
  io::write_text_file(path_in(dir, "grid.json"), io::grid_sidecar(grid).dump(2) + "\n");
  res.outputs.push_back("grid.json");
  const auto it = std::min_element(grid.values.begin(), grid.values.end());
  const auto k = static_cast<std::size_t>(it - grid.values.begin());
  res.summary = "min n_b = " + io::format_double(*it) + " at t = " +
                io::format_double(grid.axis1.values[k / grid.cols()]) + ", |G| = " +
                io::format_double(grid.axis2.values[k % grid.cols()]);
  if (r.gnuplot_stub) {
    io::write_text_file(path_in(dir, "plot.gp"),
                        "set datafile separator ','\nset xlabel '|G| [" + u.rate_name +
                            "]'\nset ylabel 't [" + u.time_name +
                            "]'\nset logscale cb\nplot 'grid.csv' nonuniform matrix using 1:2:3 "
                            "with image notitle\n");
    res.outputs.push_back("plot.gp");
  }
  return res;
}

RunResult run_limits(const Request& r, const std::string& dir, const Units& u, int jobs) {
  const Mode mode = parse_mode(r.settings.at("mode").get<std::string>());
  const std::string vs = r.settings.at("vs").get<std::string>();
  const std::vector<double> values = axis_values(r.settings.at("range"));
  LimitOptions opt;
  opt.jobs = jobs;
  opt.coarse_dt = r.settings.at("coarse_dt").get<double>();
  opt.tolerance = r.settings.at("tolerance").get<double>();
  opt.schedule = r.schedule;
  LimitCurve curve = vs == "g" ? limit_curve_vs_g(r.params, values, mode, opt)
                               : limit_curve_vs_kappa(r.params, values, mode, opt);
  for (LimitPoint& p : curve.points) {
    p.abscissa *= u.rate;
    p.t_min *= u.time;
  }

  RunResult res;
  write_csv(dir, "limits.csv", [&](std::ostream& os) { io::write_limit_csv(os, curve); }, res.outputs);
  std::vector<double> x, y;
  for (const LimitPoint& p : curve.points) {
    x.push_back(p.abscissa);
    y.push_back(p.numeric_min);
  }
  res.summary = describe_min(x, y, "n_ins");
  if (r.gnuplot_stub) {
    io::write_text_file(
        path_in(dir, "plot.gp"),
        gnuplot_header((vs == "g" ? "|G| [" : "kappa [") + u.rate_name + "]", "n_ins") +
            "set logscale y\nplot 'limits.csv' using 1:2 with linespoints, '' using 1:4 with lines, "
            "'' using 1:5 with lines, '' using 1:6 with lines, '' using 1:7 with lines\n");
    res.outputs.push_back("plot.gp");
  }
  return res;
}

RunResult run_match(const Request& r, const std::string& dir) {
  const int p_max = r.settings.at("p_max").get<int>();
  if (p_max < 3) throw UsageError("--p-max must be >= 3, got " + std::to_string(p_max));
  const auto catalog = island_catalog(p_max, r.params.omega_m);
  RunResult res;
  io::write_text_file(path_in(dir, "catalog.json"), io::catalog_json(catalog).dump(2) + "\n");
  res.outputs.push_back("catalog.json");
  res.summary = std::to_string(catalog.size()) + " matching points";
  return res;
}

RunResult run_oracle(const Request& r, const std::string& dir) {
  if (r.schedule) throw UsageError("--kappa-schedule is not supported by oracle");
  const json& s = r.settings;
  const FockConfig cfg{s.at("dim_a").get<int>(), s.at("dim_b").get<int>(),
                       s.at("leak_tolerance").get<double>(), s.at("state_cap").get<int>()};
  const std::vector<double> times =
      linspace(0.0, s.at("t_max").get<double>(), s.at("samples").get<std::size_t>());
  CompareOptions opt;
  opt.check_halving = s.at("check_halving").get<bool>();
  const OracleReport report = compare(r.params, cfg, times, s.at("tol").get<double>(), opt);

  RunResult res;
  io::write_text_file(path_in(dir, "oracle.json"), io::report_json(report).dump(2) + "\n");
  res.outputs.push_back("oracle.json");
  res.ok = report.pass;
  res.summary = std::string(report.pass ? "PASS" : "FAIL") + " max|dev| = " +
                io::format_double(report.max_abs_dev) + " (tol " + io::format_double(report.tol) + ")";
  return res;
}

}  // namespace

json request_to_json(const Request& r) {
  json j{{"subcommand", r.subcommand},
         {"params", io::to_json(r.params)},
         {"source", r.source},
         {"mechanical_frequency_hz", nullptr},
         {"si", r.si},
         {"gnuplot_stub", r.gnuplot_stub},
         {"settings", r.settings},
         {"kappa_schedule", nullptr}};
  if (r.mechanical_frequency_hz) j["mechanical_frequency_hz"] = *r.mechanical_frequency_hz;
  if (r.schedule) j["kappa_schedule"] = io::to_json(*r.schedule);
  return j;
}

Request request_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("manifest must be a JSON object");
  Request r;
  r.subcommand = field(j, "subcommand").get<std::string>();
  r.params = io::params_from_json(field(j, "params"));
  r.source = field(j, "source").get<std::string>();
  const json& f = field(j, "mechanical_frequency_hz");
  if (!f.is_null()) r.mechanical_frequency_hz = f.get<double>();
  r.si = field(j, "si").get<bool>();
  r.gnuplot_stub = field(j, "gnuplot_stub").get<bool>();
  r.settings = field(j, "settings");
  const json& sched = field(j, "kappa_schedule");
  if (!sched.is_null()) r.schedule = io::schedule_from_json(sched);
  if (r.si && !r.mechanical_frequency_hz) {
    throw UsageError("manifest sets si but has no mechanical_frequency_hz");
  }
  return r;
}

RunResult run(const Request& request, const std::string& out_dir, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory '" + out_dir + "': " + ec.message());

  const Units u = units_for(request);
  RunResult res;
  const std::string& sub = request.subcommand;
  if (sub == "evolve") {
    res = run_evolve(request, out_dir, u);
  } else if (sub == "sweep") {
    res = run_sweep(request, out_dir, u, jobs);
  } else if (sub == "limits") {
    res = run_limits(request, out_dir, u, jobs);
  } else if (sub == "match") {
    res = run_match(request, out_dir);
  } else if (sub == "oracle") {
    res = run_oracle(request, out_dir);
  } else {
    throw UsageError("unknown subcommand '" + sub + "'");
  }

  json manifest = request_to_json(request);
  manifest["tool"] = "optocool";
  manifest["version"] = OPTOCOOL_VERSION;
  manifest["units"] = {{"time", u.time_name}, {"rate", u.rate_name}};
  manifest["outputs"] = res.outputs;
  manifest["jobs"] = jobs;
  manifest["duration_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_text_file(path_in(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  res.outputs.push_back("manifest.json");
  return res;
}

}  // namespace optocool::cli
