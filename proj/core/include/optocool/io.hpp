#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optocool/moments.hpp"
#include "optocool/oracle.hpp"
#include "optocool/params.hpp"
#include "optocool/rwa.hpp"
#include "optocool/spectrum.hpp"
#include "optocool/sweep.hpp"

namespace optocool::io {

using nlohmann::json;

/// Shortest text that parses back to the same double, at most 17 significant digits.
std::string format_double(double x);

/// RFC 4180 field: quoted only when it contains a comma, quote or line break.
std::string csv_field(const std::string& text);

// Config schema (rates in omega_m units):
//   {omega_m, kappa, gamma, delta_prime, G: {re, im}, n_th,
//    drive?: {delta, g, omega_re, omega_im, kappa_0, kappa_ex},
//    mechanical_frequency_hz?}
// A drive block replaces kappa, delta_prime and G by the linearized values.
struct Config {
  SystemParams params;
  std::optional<DriveParams> drive;
  std::optional<double> mechanical_frequency_hz;
};

json to_json(const SystemParams& p);
json to_json(const DriveParams& d);
json to_json(const Config& c);
SystemParams params_from_json(const json& j);
Config config_from_json(const json& j);
Config load_config(const std::string& path);

/// [{t_start, t_end, kappa}, ...]
KappaSchedule schedule_from_json(const json& j);
json to_json(const KappaSchedule& s);

void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
void write_rwa_csv(std::ostream& os, const RwaTrajectory& tr);
void write_grid_csv(std::ostream& os, const SweepGrid& grid);
json grid_sidecar(const SweepGrid& grid);
void write_limit_csv(std::ostream& os, const LimitCurve& curve);
json catalog_json(const std::vector<IslandSpec>& catalog);
json report_json(const OracleReport& report);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace optocool::io
