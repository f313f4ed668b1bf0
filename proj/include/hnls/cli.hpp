#pragma once

// Run configuration, command dispatch and report files for the command-line tool.

#include "hnls/classify.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hnls::cli {

struct RunConfig {
  Params params{};
  Grids grids{};
  SolverOptions solver{};
  SweepSpec sweep{};
  bool run_solver = true;  // classify: allow the minimizer as a last resort
  std::string output_dir;  // empty: use --out, then HNLS_OUT_DIR, then "."
  std::string format = "json,table";
  int jobs = 1;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig& o) const;
};

/// All problems found while reading a config, one line each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

/// Flat "key = value" text with dotted keys and '#' comments.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
/// Key names understood by parse_config, in serialization order.
std::vector<std::string> config_keys();

const std::vector<std::string>& command_names();

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Series {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kNoConvergence = 3 };

struct RunRecord {
  std::string command;
  std::string version;
  std::string config_text;     // serialized config echo
  std::string input_hash;      // FNV-1a 64 of command + config_text, hex
  double wall_seconds = 0.0;   // the only field that varies between identical runs
  int exit_code = kOk;
  std::vector<std::string> errors;
  std::string results_json;    // structured results, serialized
  Table table;
  std::vector<Series> series;
};

std::string version();
std::string format_double(double v);  // shortest text that reads back exactly

RunRecord run_command(const std::string& name, const RunConfig& cfg);

/// Full record as a JSON document.
std::string record_json(const RunRecord& rec);
std::string table_csv(const Table& t);

/// Writes <command>.json, <command>.csv and <series>.dat files per the
/// comma-separated format list ("json", "table", "series"). Returns the paths.
std::vector<std::string> write_report(const RunRecord& rec, const std::string& dir, const std::string& formats);

}  // namespace hnls::cli
