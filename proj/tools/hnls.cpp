// Command-line front end: hnls <command> [--config file] [--set key=value]...

#include "hnls/cli.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  using namespace hnls::cli;
  CLI::App app{"Ground states of the NLS on a half-line joined to a plane"};
  std::string command, config_path, out_dir, format;
  std::vector<std::string> overrides;
  int jobs = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool print_config = false;

  std::string names;
  for (const auto& n : command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + names)->required()->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "extra 'key=value' lines applied after the config file");
  app.add_option("--out", out_dir, "output directory (default: output.dir, then $HNLS_OUT_DIR, then .)");
  app.add_option("--format", format, "comma list of json, table, series");
  app.add_option("--jobs", jobs, "worker threads for phase-diagram")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed recorded with the run");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");
  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  // duplicates are rejected by the parser, so an override replaces the matching line
  auto key_of = [](const std::string& line) {
    std::string k = line.substr(0, line.find('='));
    k.erase(0, k.find_first_not_of(" \t"));
    k.erase(k.find_last_not_of(" \t") + 1);
    return k;
  };
  for (const auto& o : overrides) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
      if (line.find('=') == std::string::npos || key_of(line) != key_of(o)) kept += line + "\n";
    text = kept + o + "\n";
  }

  RunConfig cfg;
  try {
    cfg = parse_config(text);
  } catch (const ConfigError& e) {
    for (const auto& item : e.items()) std::cerr << "config: " << item << "\n";
    return kValidation;
  }
  if (jobs > 0) cfg.jobs = jobs;
  if (have_seed) cfg.seed = seed;
  if (!format.empty()) cfg.format = format;
  if (print_config) {
    std::cout << serialize_config(cfg);
    return kOk;
  }

  std::string dir = out_dir;
  if (dir.empty()) dir = cfg.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("HNLS_OUT_DIR");
    dir = env && *env ? env : ".";
  }

  const RunRecord rec = run_command(command, cfg);
  for (const auto& e : rec.errors) std::cerr << "error: " << e << "\n";
  try {
    for (const auto& path : write_report(rec, dir, cfg.format)) std::cerr << "wrote " << path << "\n";
  } catch (const ConfigError& e) {
    for (const auto& item : e.items()) std::cerr << "config: " << item << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  std::cout << table_csv(rec.table);
  return rec.exit_code;
}
