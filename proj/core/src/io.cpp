#include "optocool/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "optocool/error.hpp"

namespace optocool::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::kInvalidParams, std::string("config field '") + key + "' is missing");
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::kInvalidParams, std::string("config field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

cplx complex_field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::kInvalidParams, std::string("config field '") + key + "' is missing");
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_object()) throw Error(ErrorKind::kInvalidParams, std::string("config field '") + key + "' must be {re, im}");
  return {number(v, "re"), number_or(v, "im", 0.0)};
}

}  // namespace

json to_json(const SystemParams& p) {
  return json{{"omega_m", p.omega_m},
              {"kappa", p.kappa},
              {"gamma", p.gamma},
              {"delta_prime", p.delta_prime},
              {"G", {{"re", p.G.real()}, {"im", p.G.imag()}}},
              {"n_th", p.n_th}};
}

json to_json(const DriveParams& d) {
  return json{{"delta", d.delta},       {"g", d.g},
              {"omega_re", d.omega.real()}, {"omega_im", d.omega.imag()},
              {"kappa_0", d.kappa_0},   {"kappa_ex", d.kappa_ex}};
}

json to_json(const Config& c) {
  json j = to_json(c.params);
  if (c.drive) j["drive"] = to_json(*c.drive);
  if (c.mechanical_frequency_hz) j["mechanical_frequency_hz"] = *c.mechanical_frequency_hz;
  return j;
}

SystemParams params_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidParams, "config must be a JSON object");
  SystemParams p;
  p.omega_m = number_or(j, "omega_m", 1.0);
  p.kappa = number(j, "kappa");
  p.gamma = number(j, "gamma");
  p.delta_prime = number(j, "delta_prime");
  p.G = complex_field(j, "G");
  p.n_th = number(j, "n_th");
  p.validate();
  return p;
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidParams, "config must be a JSON object");
  Config c;
  if (j.contains("mechanical_frequency_hz")) c.mechanical_frequency_hz = number(j, "mechanical_frequency_hz");
  if (!j.contains("drive")) {
    c.params = params_from_json(j);
    return c;
  }
  const json& dj = j.at("drive");
  if (!dj.is_object()) throw Error(ErrorKind::kInvalidParams, "config field 'drive' must be an object");
  DriveParams d;
  d.delta = number(dj, "delta");
  d.g = number(dj, "g");
  d.omega = {number(dj, "omega_re"), number_or(dj, "omega_im", 0.0)};
  d.kappa_0 = number(dj, "kappa_0");
  d.kappa_ex = number(dj, "kappa_ex");
  c.drive = d;
  c.params = linearize(d, number_or(j, "omega_m", 1.0), number(j, "gamma"), number(j, "n_th"));
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInvalidParams, "'" + path + "' is not valid JSON: " + e.what());
  }
}

Config load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path + "' failed");
}

KappaSchedule schedule_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("segments") ? j.at("segments") : j;
  if (!arr.is_array()) throw Error(ErrorKind::kInvalidParams, "kappa schedule must be an array of segments");
  std::vector<KappaSegment> segs;
  for (const json& s : arr) segs.push_back({number(s, "t_start"), number(s, "t_end"), number(s, "kappa")});
  return KappaSchedule(std::move(segs));
}

json to_json(const KappaSchedule& s) {
  json arr = json::array();
  for (const auto& seg : s.segments()) {
    arr.push_back({{"t_start", seg.t_start}, {"t_end", seg.t_end}, {"kappa", seg.kappa}});
  }
  return arr;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,n_b,n_a";
  for (std::size_t k = 2; k < kMomentCount; ++k) {
    os << ",re_" << moment_names()[k] << ",im_" << moment_names()[k];
  }
  os << "\r\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const MomentVector& v = tr.states[i];
    os << format_double(tr.times[i]) << ',' << format_double(v.n_b()) << ',' << format_double(v.n_a());
    for (std::size_t k = 2; k < kMomentCount; ++k) {
      os << ',' << format_double(v.v[k].real()) << ',' << format_double(v.v[k].imag());
    }
    os << "\r\n";
  }
}

void write_rwa_csv(std::ostream& os, const RwaTrajectory& tr) {
  os << "t,n_b,n_a,re_f,im_f\r\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const RwaState& s = tr.states[i];
    os << format_double(tr.times[i]) << ',' << format_double(s.n_b) << ',' << format_double(s.n_a)
       << ',' << format_double(s.f.real()) << ',' << format_double(s.f.imag()) << "\r\n";
  }
}

void write_grid_csv(std::ostream& os, const SweepGrid& grid) {
  os << csv_field(grid.axis1.name + "\\" + grid.axis2.name);
  for (double g : grid.axis2.values) os << ',' << format_double(g);
  os << "\r\n";
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    os << format_double(grid.axis1.values[i]);
    for (std::size_t j = 0; j < grid.cols(); ++j) os << ',' << format_double(grid.at(i, j));
    os << "\r\n";
  }
}

json grid_sidecar(const SweepGrid& grid) {
  json cells = json::array();
  for (const GridCell& c : local_minima(grid)) cells.push_back(json::array({c.i, c.j, c.value}));
  auto axis = [](const Axis& a) {
    return json{{"name", a.name}, {"unit", a.unit}, {"count", a.values.size()},
                {"first", a.values.front()}, {"last", a.values.back()}};
  };
  return json{{"axes", json::array({axis(grid.axis1), axis(grid.axis2)})},
              {"layout", "rows follow axes[0], columns follow axes[1]"},
              {"mode", std::string(to_string(grid.mode))},
              {"params_base", to_json(grid.params_base)},
              {"min_cells", cells}};
}

void write_limit_csv(std::ostream& os, const LimitCurve& curve) {
  os << "abscissa,numeric_min,t_min,n_ins_rwa,n_ins_zero_temp,bound_unmatched,bound_matched\r\n";
  for (const LimitPoint& p : curve.points) {
    os << format_double(p.abscissa) << ',' << format_double(p.numeric_min) << ','
       << format_double(p.t_min) << ',' << format_double(p.n_ins_rwa) << ','
       << format_double(p.n_ins_zero_temp) << ',' << format_double(p.bound_unmatched) << ','
       << format_double(p.bound_matched) << "\r\n";
  }
}

json catalog_json(const std::vector<IslandSpec>& catalog) {
  json arr = json::array();
  for (const IslandSpec& s : catalog) {
    arr.push_back({{"p", s.p}, {"q", s.q}, {"g_opt", s.g_opt}, {"t_opt", s.t_opt}, {"reducible", s.reducible}});
  }
  return arr;
}

json report_json(const OracleReport& r) {
  return json{{"max_abs_dev", r.max_abs_dev},
              {"max_abs_dev_n_a", r.max_abs_dev_n_a},
              {"tol", r.tol},
              {"pass", r.pass},
              {"leak_max", r.leak_max},
              {"trace_drift", r.trace_drift},
              {"hermiticity", r.hermiticity},
              {"min_population", r.min_population},
              {"halving_dev", r.halving_dev},
              {"renormalization", r.renormalization},
              {"dims", {r.config.dim_a, r.config.dim_b}},
              {"params", to_json(r.params)}};
}

}  // namespace optocool::io
