// optocool command-line front end.
//
// Every subcommand resolves its flags into a Request, runs it and writes the
// outputs plus manifest.json into --out. --from-manifest rebuilds the Request
// from a manifest, so a replay reproduces the CSVs byte for byte.

#include <charconv>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "optocool/error.hpp"
#include "optocool/io.hpp"
#include "optocool/oracle.hpp"
#include "optocool/params.hpp"
#include "optocool/sweep.hpp"
#include "request.hpp"

namespace {

using optocool::Error;
using optocool::ErrorKind;
using optocool::cli::json;
using optocool::cli::Request;
using optocool::cli::UsageError;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct SourceOptions {
  std::string preset;
  std::string config;
  std::optional<double> g;
  std::optional<double> kappa;
  std::optional<double> gamma;
  std::optional<double> n_th;
  std::optional<double> delta_prime;
  std::string schedule;

  void attach(CLI::App* sub, bool with_schedule, bool with_g = true) {
    auto* p = sub->add_option("--preset", preset, "named parameter set (default paper_fig1)");
    auto* c = sub->add_option("--config", config, "JSON parameter file");
    p->excludes(c);
    if (with_g) sub->add_option("--g", g, "coupling magnitude |G| (phase of the base value is kept)");
    sub->add_option("--kappa", kappa, "cavity decay rate");
    sub->add_option("--gamma", gamma, "mechanical damping rate");
    sub->add_option("--nth", n_th, "thermal phonon number");
    sub->add_option("--delta-prime", delta_prime, "modified detuning");
    if (with_schedule) sub->add_option("--kappa-schedule", schedule, "JSON kappa(t) segments");
  }
};

struct Globals {
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool si = false;
  bool gnuplot_stub = false;
  std::string manifest;
  std::string out = ".";
};

struct Range {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
};

double parse_number(const std::string& text, const std::string& what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
    throw UsageError(what + ": '" + text + "' is not a finite number");
  }
  return x;
}

// start:stop:count
Range parse_range(const std::string& text, const std::string& flag) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw UsageError(flag + " must look like start:stop:count, got '" + text + "'");
  }
  Range r;
  r.start = parse_number(text.substr(0, a), flag + " start");
  r.stop = parse_number(text.substr(a + 1, b - a - 1), flag + " stop");
  const double n = parse_number(text.substr(b + 1), flag + " count");
  if (n != std::floor(n) || n < 0.0) throw UsageError(flag + " count must be a whole number");
  r.count = static_cast<std::size_t>(n);
  if (r.count == 0) throw UsageError(flag + " is empty (count 0)");
  if (r.count > 1 && !(r.stop > r.start)) {
    throw UsageError(flag + " needs stop > start when count > 1");
  }
  return r;
}

json range_json(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}}; }

struct Scale {
  double time = 1.0;  // dimensionless time per input unit
  double rate = 1.0;  // dimensionless rate per input unit
};

Scale input_scale(const Request& r) {
  if (!r.si) return {};
  const double f = *r.mechanical_frequency_hz;
  return {2.0 * std::numbers::pi * f, 1.0 / f};
}

Request resolve_source(const std::string& subcommand, const SourceOptions& src, const Globals& g) {
  Request r;
  r.subcommand = subcommand;
  r.si = g.si;
  r.gnuplot_stub = g.gnuplot_stub;
  if (!src.config.empty()) {
    const optocool::io::Config cfg = optocool::io::load_config(src.config);
    r.params = cfg.params;
    r.mechanical_frequency_hz = cfg.mechanical_frequency_hz;
    r.source = "config:" + src.config;
  } else {
    const optocool::Preset p = optocool::preset(src.preset.empty() ? "paper_fig1" : src.preset);
    r.params = p.params;
    r.mechanical_frequency_hz = p.mechanical_frequency_hz;
    r.source = "preset:" + p.name;
  }
  if (r.si && !r.mechanical_frequency_hz) {
    throw UsageError("--si needs mechanical_frequency_hz from the preset or config");
  }
  const Scale s = input_scale(r);
  if (src.g) {
    const double mag = std::abs(r.params.G);
    const optocool::cplx phase = mag > 0.0 ? r.params.G / mag : optocool::cplx(1.0, 0.0);
    r.params.G = phase * (*src.g * s.rate);
  }
  if (src.kappa) r.params.kappa = *src.kappa * s.rate;
  if (src.gamma) r.params.gamma = *src.gamma * s.rate;
  if (src.n_th) r.params.n_th = *src.n_th;
  if (src.delta_prime) r.params.delta_prime = *src.delta_prime * s.rate;
  r.params.validate();

  if (!src.schedule.empty()) {
    json segs = optocool::io::read_json_file(src.schedule);
    if (segs.is_object() && segs.contains("segments")) segs = segs.at("segments");
    if (r.si && segs.is_array()) {
      for (json& seg : segs) {
        for (const char* k : {"t_start", "t_end"}) {
          if (seg.contains(k) && seg[k].is_number()) seg[k] = seg[k].get<double>() * s.time;
        }
        if (seg.contains("kappa") && seg["kappa"].is_number()) seg["kappa"] = seg["kappa"].get<double>() * s.rate;
      }
    }
    r.schedule = optocool::io::schedule_from_json(segs);
  }
  return r;
}

void check_mode(const std::string& mode) {
  if (mode != "full" && mode != "rwa" && mode != "zero_temp") {
    throw UsageError("--mode must be full, rwa or zero_temp, got '" + mode + "'");
  }
}

double time_setting(double t, const std::string& flag, const Scale& s) {
  if (!std::isfinite(t) || t < 0.0) throw UsageError(flag + " must be >= 0");
  return t * s.time;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParams:
    case ErrorKind::kUnknownPreset:
    case ErrorKind::kScheduleGap:
    case ErrorKind::kWindowEmpty:
    case ErrorKind::kCapExceeded:
    case ErrorKind::kWeakCoupling:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void print_presets() {
  for (const std::string& name : optocool::preset_names()) {
    std::cout << name << "  " << optocool::preset(name).description << "\n";
  }
}

int print_preset(const std::string& name) {
  const optocool::Preset p = optocool::preset(name);
  optocool::io::Config cfg;
  cfg.params = p.params;
  cfg.mechanical_frequency_hz = p.mechanical_frequency_hz;
  std::cout << optocool::io::to_json(cfg).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical cooling simulator"};
  app.set_version_flag("--version", OPTOCOOL_VERSION);
  app.require_subcommand(0, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--si", g.si, "times in seconds and rates in Hz (needs mechanical_frequency_hz)");
  app.add_flag("--gnuplot-stub", g.gnuplot_stub, "also write plot.gp next to the CSV");
  app.add_option("--from-manifest", g.manifest, "replay the run recorded in a manifest");
  app.add_option("--out", g.out, "output directory (default .)");

  SourceOptions src;
  std::string mode = "full";
  double t_max = 200.0;
  long long samples = 2001;

  auto* evolve = app.add_subcommand("evolve", "moment time series N_b(t)");
  src.attach(evolve, true);
  evolve->add_option("--mode", mode, "full, rwa or zero_temp");
  evolve->add_option("--t-max", t_max, "end time");
  evolve->add_option("--samples", samples, "number of sample times including t = 0");

  std::string g_axis = "0.01:0.45:200";
  std::string t_axis = "0:40:800";
  auto* sweep = app.add_subcommand("sweep", "N_b over a (t, |G|) grid");
  // --g is the coupling axis here.
  src.attach(sweep, false, false);
  sweep->add_option("--mode", mode, "full, rwa or zero_temp");
  sweep->add_option("--g", g_axis, "coupling axis start:stop:count");
  sweep->add_option("--t", t_axis, "time axis start:stop:count");

  std::string vs = "g";
  std::string range;
  double coarse_dt = 0.01;
  double tolerance = 1e-4;
  auto* limits = app.add_subcommand("limits", "instantaneous cooling limit along G or kappa");
  src.attach(limits, true);
  limits->add_option("--mode", mode, "full, rwa or zero_temp");
  limits->add_option("--vs", vs, "abscissa: g or kappa")->check(CLI::IsMember({"g", "kappa"}));
  limits->add_option("--range", range, "abscissa start:stop:count")->required();
  limits->add_option("--coarse-dt", coarse_dt, "coarse search step");
  limits->add_option("--tolerance", tolerance, "golden-section interval width");

  int p_max = 9;
  auto* match = app.add_subcommand("match", "frequency-matching catalog as JSON");
  match->add_option("--p-max", p_max, "largest p in the catalog (>= 3)");

  int dim_a = 12;
  int dim_b = 12;
  double tol = 1e-3;
  double leak_tol = 1e-6;
  int state_cap = 400;
  bool no_halving = false;
  double oracle_t_max = 20.0;
  long long oracle_samples = 41;
  auto* oracle = app.add_subcommand("oracle", "truncated Fock-space check of the moment engine");
  src.attach(oracle, false);
  oracle->add_option("--dim-a", dim_a, "cavity levels");
  oracle->add_option("--dim-b", dim_b, "phonon levels");
  oracle->add_option("--tol", tol, "allowed |N_b| deviation");
  oracle->add_option("--leak-tol", leak_tol, "allowed top-level population");
  oracle->add_option("--state-cap", state_cap, "largest dim_a * dim_b");
  oracle->add_option("--t-max", oracle_t_max, "end time");
  oracle->add_option("--samples", oracle_samples, "number of sample times including t = 0");
  oracle->add_flag("--no-halving", no_halving, "skip the step-halving check");

  std::string preset_name;
  bool list = false;
  auto* preset_cmd = app.add_subcommand("preset", "print a preset as a loadable config");
  preset_cmd->add_option("name", preset_name, "preset name");
  preset_cmd->add_flag("--list", list, "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  bool running = false;
  try {
    Request request;
    if (!g.manifest.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--from-manifest takes no subcommand");
      if (g.si || g.gnuplot_stub) {
        throw UsageError("--si and --gnuplot-stub come from the manifest when replaying");
      }
      request = optocool::cli::request_from_json(optocool::io::read_json_file(g.manifest));
    } else if (app.got_subcommand(preset_cmd)) {
      if (list || preset_name.empty()) {
        print_presets();
        return 0;
      }
      return print_preset(preset_name);
    } else if (app.got_subcommand(match)) {
      if (g.si) throw UsageError("--si does not apply to match");
      request.subcommand = "match";
      request.source = "none";
      request.gnuplot_stub = false;
      if (p_max < 3) throw UsageError("--p-max must be >= 3, got " + std::to_string(p_max));
      request.settings = {{"p_max", p_max}};
    } else if (app.got_subcommand(evolve)) {
      request = resolve_source("evolve", src, g);
      check_mode(mode);
      if (samples < 1) throw UsageError("--samples must be >= 1, got " + std::to_string(samples));
      const double t = time_setting(t_max, "--t-max", input_scale(request));
      if (samples > 1 && !(t > 0.0)) throw UsageError("--t-max must be > 0 when --samples > 1");
      request.settings = {{"mode", mode}, {"t_max", t}, {"samples", samples}};
    } else if (app.got_subcommand(sweep)) {
      request = resolve_source("sweep", src, g);
      check_mode(mode);
      const Scale s = input_scale(request);
      Range ga = parse_range(g_axis, "--g");
      Range ta = parse_range(t_axis, "--t");
      ga.start *= s.rate;
      ga.stop *= s.rate;
      ta.start = time_setting(ta.start, "--t start", s);
      ta.stop *= s.time;
      request.settings = {{"mode", mode}, {"g", range_json(ga)}, {"t", range_json(ta)}};
    } else if (app.got_subcommand(limits)) {
      request = resolve_source("limits", src, g);
      check_mode(mode);
      Range ra = parse_range(range, "--range");
      const Scale s = input_scale(request);
      ra.start *= s.rate;
      ra.stop *= s.rate;
      if (!(coarse_dt > 0.0)) throw UsageError("--coarse-dt must be > 0");
      if (!(tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
      request.settings = {{"mode", mode},
                          {"vs", vs},
                          {"range", range_json(ra)},
                          {"coarse_dt", coarse_dt * s.time},
                          {"tolerance", tolerance * s.time}};
    } else if (app.got_subcommand(oracle)) {
      request = resolve_source("oracle", src, g);
      if (oracle_samples < 1) {
        throw UsageError("--samples must be >= 1, got " + std::to_string(oracle_samples));
      }
      const double t = time_setting(oracle_t_max, "--t-max", input_scale(request));
      if (oracle_samples > 1 && !(t > 0.0)) throw UsageError("--t-max must be > 0 when --samples > 1");
      if (!(tol > 0.0)) throw UsageError("--tol must be > 0");
      request.settings = {{"dim_a", dim_a},     {"dim_b", dim_b},
                          {"tol", tol},         {"leak_tolerance", leak_tol},
                          {"state_cap", state_cap}, {"t_max", t},
                          {"samples", oracle_samples}, {"check_halving", !no_halving}};
      optocool::FockConfig{dim_a, dim_b, leak_tol, state_cap}.validate();
    } else {
      std::cerr << app.help();
      return kExitUsage;
    }

    running = true;
    const auto res = optocool::cli::run(request, g.out, g.jobs);
    for (const std::string& f : res.outputs) std::cout << "wrote " << g.out << "/" << f << "\n";
    if (!res.summary.empty()) std::cout << res.summary << "\n";
    return res.ok ? 0 : kExitRuntime;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::kIo) return running ? kExitRuntime : kExitUsage;
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
