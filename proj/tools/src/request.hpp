#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "optocool/moments.hpp"
#include "optocool/params.hpp"

namespace optocool::cli {

using nlohmann::json;

/// Usage and configuration problems, reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run depends on, fully resolved. A manifest stores this verbatim
/// so a replay sees exactly the numbers the original run saw.
struct Request {
  std::string subcommand;
  SystemParams params;
  std::string source;  // "preset:NAME" or "config:PATH"
  std::optional<double> mechanical_frequency_hz;
  bool si = false;
  bool gnuplot_stub = false;
  json settings = json::object();
  std::optional<KappaSchedule> schedule;
};

json request_to_json(const Request& r);
Request request_from_json(const json& j);

struct RunResult {
  std::vector<std::string> outputs;
  std::string summary;
  bool ok = true;  // false when the run finished but its check failed
};

/// Runs the request and writes its outputs plus manifest.json into out_dir.
RunResult run(const Request& request, const std::string& out_dir, int jobs);

}  // namespace optocool::cli
