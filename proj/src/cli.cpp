#include "hnls/cli.hpp"

#include "hnls/plane2d.hpp"
#include "hnls/soliton1d.hpp"
#include "hnls/spectrum.hpp"

#include "json.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hnls::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

template <class I>
bool to_int(const std::string& s, I& out) {
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

// a range check: empty string when fine
using Check = std::function<std::string(double)>;

Check open_interval(double lo, double hi, const char* note) {
  return [=](double v) {
    if (v > lo && v < hi) return std::string();
    return "must lie in (" + format_double(lo) + ", " + format_double(hi) + ")" + (note ? std::string(" ") + note : "");
  };
}
Check positive() {
  return [](double v) { return v > 0.0 ? std::string() : std::string("must be positive"); };
}
Check nonnegative() {
  return [](double v) { return v >= 0.0 ? std::string() : std::string("must be nonnegative"); };
}
Check finite() {
  return [](double v) { return std::isfinite(v) ? std::string() : std::string("must be finite"); };
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  // returns an error message, empty on success
  std::function<std::string(RunConfig&, const std::string&)> set;
};

template <class Get>
Field real(std::string key, Get ref, Check check) {
  Field f;
  f.key = key;
  f.get = [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); };
  f.set = [ref, check](RunConfig& c, const std::string& v) {
    double x;
    if (!to_double(v, x)) return "not a number: '" + v + "'";
    if (const std::string e = check(x); !e.empty()) return e;
    ref(c) = x;
    return std::string();
  };
  return f;
}

template <class Get>
Field integer(std::string key, Get ref, long lo) {
  Field f;
  f.key = key;
  f.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
  f.set = [ref, lo](RunConfig& c, const std::string& v) {
    long x;
    if (!to_int(v, x)) return "not an integer: '" + v + "'";
    if (x < lo) return "must be at least " + std::to_string(lo);
    ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(x);
    return std::string();
  };
  return f;
}

template <class Get>
Field boolean(std::string key, Get ref) {
  Field f;
  f.key = key;
  f.get = [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); };
  f.set = [ref](RunConfig& c, const std::string& v) {
    if (v == "true") ref(c) = true;
    else if (v == "false") ref(c) = false;
    else return "expected true or false, got '" + v + "'";
    return std::string();
  };
  return f;
}

template <class Get>
Field list(std::string key, Get ref, Check check) {
  Field f;
  f.key = key;
  f.get = [ref](const RunConfig& c) { return join(ref(const_cast<RunConfig&>(c))); };
  f.set = [ref, check](RunConfig& c, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double x;
      if (!to_double(item, x)) return "not a number: '" + item + "'";
      if (const std::string e = check(x); !e.empty()) return "entry " + item + " " + e;
      out.push_back(x);
    }
    if (out.empty()) return std::string("empty list");
    ref(c) = out;
    return std::string();
  };
  return f;
}

template <class Get>
Field text(std::string key, Get ref) {
  Field f;
  f.key = key;
  f.get = [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); };
  f.set = [ref](RunConfig& c, const std::string& v) {
    ref(c) = v;
    return std::string();
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    const Check p_range = open_interval(2.0, 6.0, "(subcritical half-line power)");
    const Check r_range = open_interval(2.0, 4.0, "(subcritical planar power)");
    std::vector<Field> v;
    v.push_back(real("params.alpha", [](RunConfig& c) -> double& { return c.params.alpha; }, finite()));
    v.push_back(real("params.rho", [](RunConfig& c) -> double& { return c.params.rho; }, finite()));
    v.push_back(real("params.beta", [](RunConfig& c) -> double& { return c.params.beta; }, nonnegative()));
    v.push_back(real("params.p", [](RunConfig& c) -> double& { return c.params.p; }, p_range));
    v.push_back(real("params.r", [](RunConfig& c) -> double& { return c.params.r; }, r_range));
    v.push_back(real("params.mu", [](RunConfig& c) -> double& { return c.params.mu; }, positive()));
    v.push_back(real("grid.halfline.L", [](RunConfig& c) -> double& { return c.grids.half.L; }, positive()));
    v.push_back(integer("grid.halfline.N", [](RunConfig& c) -> int& { return c.grids.half.N; }, 5));
    v.push_back(real("grid.radial.R", [](RunConfig& c) -> double& { return c.grids.radial.R; }, positive()));
    v.push_back(integer("grid.radial.M", [](RunConfig& c) -> int& { return c.grids.radial.M; }, 5));
    v.push_back(real("grid.radial.g", [](RunConfig& c) -> double& { return c.grids.radial.g; },
                     open_interval(0.5, 8.0, nullptr)));
    v.push_back(integer("solver.max_iterations", [](RunConfig& c) -> int& { return c.solver.max_iterations; }, 1));
    v.push_back(real("solver.tolerance", [](RunConfig& c) -> double& { return c.solver.tolerance; }, positive()));
    v.push_back(real("solver.armijo", [](RunConfig& c) -> double& { return c.solver.armijo; },
                     open_interval(0.0, 0.5, nullptr)));
    v.push_back(boolean("solver.momentum", [](RunConfig& c) -> bool& { return c.solver.momentum; }));
    v.push_back(real("solver.escape_fraction", [](RunConfig& c) -> double& { return c.solver.escape_fraction; },
                     open_interval(0.0, 1.0, nullptr)));
    v.push_back(real("solver.escape_mass_fraction",
                     [](RunConfig& c) -> double& { return c.solver.escape_mass_fraction; },
                     open_interval(0.0, 1.0, nullptr)));
    v.push_back(real("solver.escape_energy_tolerance",
                     [](RunConfig& c) -> double& { return c.solver.escape_energy_tolerance; }, positive()));
    v.push_back(integer("solver.monitor_every", [](RunConfig& c) -> int& { return c.solver.monitor_every; }, 1));
    v.push_back(list("sweep.alpha", [](RunConfig& c) -> std::vector<double>& { return c.sweep.alpha; }, finite()));
    v.push_back(list("sweep.rho", [](RunConfig& c) -> std::vector<double>& { return c.sweep.rho; }, finite()));
    v.push_back(list("sweep.beta", [](RunConfig& c) -> std::vector<double>& { return c.sweep.beta; }, nonnegative()));
    v.push_back(list("sweep.p", [](RunConfig& c) -> std::vector<double>& { return c.sweep.p; }, p_range));
    v.push_back(list("sweep.r", [](RunConfig& c) -> std::vector<double>& { return c.sweep.r; }, r_range));
    v.push_back(list("sweep.mu", [](RunConfig& c) -> std::vector<double>& { return c.sweep.mu; }, positive()));
    v.push_back(boolean("classify.run_solver", [](RunConfig& c) -> bool& { return c.run_solver; }));
    v.push_back(text("output.dir", [](RunConfig& c) -> std::string& { return c.output_dir; }));
    v.push_back(text("output.format", [](RunConfig& c) -> std::string& { return c.format; }));
    v.push_back(integer("run.jobs", [](RunConfig& c) -> int& { return c.jobs; }, 1));
    v.push_back(integer("run.seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }, 0));
    return v;
  }();
  return f;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// JSON cannot hold inf or nan
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join_lines(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "\n") + x;
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> items)
    : std::runtime_error("invalid configuration:\n" + join_lines(items)), items_(std::move(items)) {}

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> k;
  for (const auto& f : fields()) k.push_back(f.key);
  return k;
}

RunConfig parse_config(const std::string& textin) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  std::istringstream in(textin);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const Field* f = nullptr;
    for (const auto& x : fields())
      if (x.key == key) f = &x;
    if (!f) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back(where + "duplicate key '" + key + "'");
      continue;
    }
    if (const std::string e = f->set(cfg, value); !e.empty()) errors.push_back(where + key + " = " + value + ": " + e);
  }
  // cross-field checks through the library validators
  auto guard = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  };
  if (errors.empty()) {
    guard([&] { validate(cfg.params); });
    guard([&] { validate(cfg.grids.half); });
    guard([&] { validate(cfg.grids.radial); });
    guard([&] { validate(cfg.solver); });
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"thresholds", "spectrum",       "plane-gs", "halfline-gs", "groundstate",
                                              "classify",   "phase-diagram", "verify",   "gn-audit"};
  return names;
}

std::string version() { return "0.1.0"; }

namespace {

json thresholds_json(const ThresholdReport& t) {
  json j;
  j["theta_p"] = t.theta_p;
  j["tau_r"] = t.tau_r;
  j["tau_r_error"] = t.tau_r_error;
  j["r_star"] = t.r_star;
  j["mu_threshold"] = t.mu_threshold ? json(*t.mu_threshold) : json(nullptr);
  j["alpha_p"] = t.alpha_p;
  j["alpha_p_exact"] = t.alpha_p_exact;
  j["rho_star"] = t.rho_star ? json(*t.rho_star) : json(nullptr);
  j["rho_star_error"] = t.rho_star_error;
  j["k_star"] = num(t.k_star);  // null means +infinity
  j["e_lin"] = t.e_lin;
  j["soliton_level"] = t.soliton_level;
  j["free_plane_level"] = t.free_plane_level;
  return j;
}

json classification_json(const Classification& c) {
  json j;
  j["label"] = to_string(c.label);
  j["rule"] = c.rule;
  j["conflict"] = c.conflict;
  j["justification"] = c.justification;
  j["energy"] = c.energy ? json(*c.energy) : json(nullptr);
  j["solver_status"] = c.solver_status ? json(to_string(*c.solver_status)) : json(nullptr);
  j["thresholds"] = thresholds_json(c.thresholds);
  return j;
}

json params_json(const Params& p) {
  return json{{"alpha", p.alpha}, {"rho", p.rho}, {"beta", p.beta}, {"p", p.p}, {"r", p.r}, {"mu", p.mu}};
}

std::vector<std::string> param_columns() { return {"mu", "alpha", "rho", "beta", "p", "r"}; }
std::vector<std::string> param_cells(const Params& p) {
  return {format_double(p.mu), format_double(p.alpha), format_double(p.rho),
          format_double(p.beta), format_double(p.p), format_double(p.r)};
}

Series halfline_series(const HybridState& s) {
  Series out{"halfline_profile", {"x", "abs_u"}, {}};
  for (int i = 0; i < s.hgrid.N; ++i) out.rows.push_back({s.hgrid.x(i), std::abs(s.u[i])});
  return out;
}

Series plane_series(const HybridState& s) {
  Series out{"plane_profile", {"r", "abs_v"}, {}};
  const VecC v = planar_field(s);
  for (int j = 0; j < s.rgrid.M; ++j) out.rows.push_back({s.rgrid.r(j), std::abs(v[j])});
  return out;
}

json report_json(const MinimizerReport& rep) {
  json j;
  j["status"] = to_string(rep.status);
  j["energy"] = rep.energy;
  j["soliton_level"] = rep.soliton_level;
  j["omega_star"] = rep.omega_star;
  j["multiplier"] = rep.multiplier;
  j["iterations"] = rep.iterations;
  j["gradient_norm"] = rep.gradient_norm;
  j["seed_label"] = rep.seed_label;
  j["escape_mass_fraction"] = rep.escape_mass_fraction;
  j["monotone"] = rep.monotone;
  j["mass"] = mass(rep.state);
  j["q"] = std::abs(rep.state.q);
  j["u0"] = std::abs(rep.state.u[0]);
  json seeds = json::array();
  for (const auto& s : rep.seeds)
    seeds.push_back({{"label", s.label},
                     {"status", to_string(s.status)},
                     {"initial_energy", s.initial_energy},
                     {"final_energy", s.final_energy},
                     {"iterations", s.iterations},
                     {"gradient_norm", s.gradient_norm},
                     {"monotone", s.monotone}});
  j["seeds"] = seeds;
  return j;
}

void groundstate_table(RunRecord& rec, const Params& prm, const MinimizerReport& rep) {
  rec.table.columns = param_columns();
  for (const char* c : {"status", "energy", "soliton_level", "omega_star", "iterations", "seed"})
    rec.table.columns.push_back(c);
  auto row = param_cells(prm);
  row.insert(row.end(), {to_string(rep.status), format_double(rep.energy), format_double(rep.soliton_level),
                         format_double(rep.omega_star), std::to_string(rep.iterations), rep.seed_label});
  rec.table.rows.push_back(row);
  rec.series.push_back(halfline_series(rep.state));
  rec.series.push_back(plane_series(rep.state));
}

void dispatch(RunRecord& rec, const RunConfig& cfg) {
  const Params& prm = cfg.params;
  const std::string& cmd = rec.command;
  json res;
  ClassifyBudget budget{cfg.grids, cfg.solver, cfg.run_solver};

  if (cmd == "thresholds") {
    const ThresholdReport t = thresholds(prm, budget);
    res = thresholds_json(t);
    rec.table.columns = param_columns();
    auto row = param_cells(prm);
    for (auto& [k, v] : res.items()) {
      rec.table.columns.push_back(k);
      if (v.is_number_float()) row.push_back(format_double(v.get<double>()));
      else if (v.is_null()) row.push_back(k == "k_star" ? "inf" : "");
      else row.push_back(v.dump());
    }
    rec.table.rows.push_back(row);
  } else if (cmd == "spectrum") {
    const SpectrumResult s = discrete_spectrum(prm);
    res["eigenvalues"] = s.eigenvalues;
    res["e_lin"] = s.e_lin;
    res["ell_alpha"] = s.ell_alpha;
    res["omega_rho"] = s.omega_rho;
    res["case"] = s.case_label;
    rec.table.columns = param_columns();
    rec.table.columns.insert(rec.table.columns.end(), {"index", "eigenvalue"});
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
      auto row = param_cells(prm);
      row.insert(row.end(), {std::to_string(k), format_double(s.eigenvalues[k])});
      rec.table.rows.push_back(row);
    }
  } else if (cmd == "plane-gs") {
    PlaneSolveOptions opt;
    opt.grid = cfg.grids.radial;
    opt.max_iterations = cfg.solver.max_iterations;
    opt.tolerance = cfg.solver.tolerance;
    const PlaneGroundState g = plane_ground_state(prm.r, prm.rho, prm.mu, opt);
    res = {{"energy", g.energy},     {"mass", g.mass},
           {"q", g.q},               {"omega", g.omega},
           {"lambda", g.lambda_used}, {"gradient_norm", g.gradient_norm},
           {"iterations", g.iterations}, {"seed", g.seed},
           {"omega_rho", omega_rho(prm.rho)}};
    rec.table.columns = param_columns();
    rec.table.columns.insert(rec.table.columns.end(), {"energy", "q", "omega"});
    auto row = param_cells(prm);
    row.insert(row.end(), {format_double(g.energy), format_double(g.q), format_double(g.omega)});
    rec.table.rows.push_back(row);
    Series s{"plane_profile", {"r", "abs_v"}, {}};
    const VecR m = g.modulus();
    for (int j = 0; j < g.grid.M; ++j) s.rows.push_back({g.grid.r(j), m[j]});
    rec.series.push_back(s);
  } else if (cmd == "halfline-gs") {
    const HalflineGroundState g = halfline_ground_state(prm.p, prm.alpha, prm.mu);
    res = {{"exists", g.exists}, {"boundary", g.boundary}, {"omega", g.omega}, {"shift", g.shift},
           {"energy", g.energy}, {"level", g.level},       {"candidates", g.candidates}};
    rec.table.columns = param_columns();
    rec.table.columns.insert(rec.table.columns.end(), {"exists", "energy", "level", "omega", "shift"});
    auto row = param_cells(prm);
    row.insert(row.end(), {g.exists ? "true" : "false", format_double(g.energy), format_double(g.level),
                           format_double(g.omega), format_double(g.shift)});
    rec.table.rows.push_back(row);
    if (g.exists) {
      Series s{"halfline_profile", {"x", "u"}, {}};
      const VecR u = g.sample(cfg.grids.half);
      for (int i = 0; i < cfg.grids.half.N; ++i) s.rows.push_back({cfg.grids.half.x(i), u[i]});
      rec.series.push_back(s);
    }
  } else if (cmd == "groundstate" || cmd == "verify" || cmd == "gn-audit") {
    const MinimizerReport rep = minimize_energy(prm, cfg.grids, cfg.solver);
    res["report"] = report_json(rep);
    groundstate_table(rec, prm, rep);
    if (cmd == "verify") {
      const Verification v = verify_ground_state(rep, prm);
      json checks = json::array();
      for (const auto& c : v.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", num(c.value)},
                          {"threshold", num(c.threshold)},
                          {"detail", c.detail}});
      res["checks"] = checks;
      res["all_passed"] = v.all_passed();
    } else if (cmd == "gn-audit") {
      const GNReport g = gn_audit(rep.state, prm);
      json rows = json::array();
      for (const auto& r : g.rows)
        rows.push_back({{"name", r.name}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"quotient", num(r.quotient)}});
      res["gn"] = rows;
    }
    if (rep.status == MinimizerStatus::MaxIterations) {
      rec.exit_code = kNoConvergence;
      rec.errors.push_back("minimizer did not converge within the iteration budget");
    }
  } else if (cmd == "classify") {
    const Classification c = classify(prm, budget);
    res = classification_json(c);
    rec.table.columns = param_columns();
    rec.table.columns.insert(rec.table.columns.end(), {"label", "energy", "soliton_level", "justification_id"});
    auto row = param_cells(prm);
    row.insert(row.end(), {to_string(c.label), c.energy ? format_double(*c.energy) : "",
                           format_double(c.thresholds.soliton_level), c.rule});
    rec.table.rows.push_back(row);
  } else if (cmd == "phase-diagram") {
    const auto rows = phase_diagram(cfg.sweep, budget, cfg.jobs);
    json arr = json::array();
    rec.table.columns = param_columns();
    rec.table.columns.insert(rec.table.columns.end(), {"label", "energy", "soliton_level", "justification_id"});
    Series s{"phase_diagram", {"alpha", "rho", "beta", "p", "r", "mu", "label_code"}, {}};
    for (const auto& r : rows) {
      json j{{"params", params_json(r.params)}};
      if (!r.error.empty()) j["error"] = r.error;
      else j["classification"] = classification_json(r.result);
      arr.push_back(j);
      const Classification& c = r.result;
      auto row = param_cells(r.params);
      row.insert(row.end(), {r.error.empty() ? to_string(c.label) : "Error", c.energy ? format_double(*c.energy) : "",
                             format_double(c.thresholds.soliton_level), r.error.empty() ? c.rule : "error"});
      rec.table.rows.push_back(row);
      const double code = c.label == Label::Exists ? 1.0 : c.label == Label::NotExists ? -1.0 : 0.0;
      s.rows.push_back({r.params.alpha, r.params.rho, r.params.beta, r.params.p, r.params.r, r.params.mu, code});
    }
    res["rows"] = arr;
    rec.series.push_back(s);
  } else {
    throw ConfigError({"unknown command '" + cmd + "'"});
  }
  rec.results_json = res.dump();
}

}  // namespace

RunRecord run_command(const std::string& name, const RunConfig& cfg) {
  RunRecord rec;
  rec.command = name;
  rec.version = version();
  rec.config_text = serialize_config(cfg);
  rec.input_hash = fnv1a(name + "\n" + rec.config_text);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    dispatch(rec, cfg);
  } catch (const ConfigError& e) {
    rec.exit_code = kValidation;
    rec.errors = e.items();
  } catch (const DomainError& e) {
    rec.exit_code = kValidation;
    rec.errors.push_back(e.what());
  } catch (const SolverError& e) {
    rec.exit_code = kNoConvergence;
    rec.errors.push_back(std::string(e.what()) + " (residual " + format_double(e.residual()) + ", iterations " +
                         std::to_string(e.iterations()) + ")");
  } catch (const RootFindError& e) {
    rec.exit_code = kNoConvergence;
    rec.errors.push_back(e.what());
  } catch (const BracketError& e) {
    rec.exit_code = kNoConvergence;
    rec.errors.push_back(e.what());
  } catch (const std::exception& e) {
    rec.exit_code = kInternal;
    rec.errors.push_back(e.what());
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::string record_json(const RunRecord& rec) {
  json j;
  j["command"] = rec.command;
  j["version"] = rec.version;
  j["input_hash"] = rec.input_hash;
  j["exit_code"] = rec.exit_code;
  j["errors"] = rec.errors;
  j["config"] = rec.config_text;
  j["results"] = rec.results_json.empty() ? json(nullptr) : json::parse(rec.results_json);
  j["wall_seconds"] = rec.wall_seconds;
  return j.dump(2) + "\n";
}

std::string table_csv(const Table& t) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + cell(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

std::vector<std::string> write_report(const RunRecord& rec, const std::string& dir, const std::string& formats) {
  namespace fs = std::filesystem;
  std::set<std::string> want;
  std::stringstream ss(formats);
  for (std::string f; std::getline(ss, f, ',');) {
    f = trim(f);
    if (f != "json" && f != "table" && f != "series") throw ConfigError({"unknown output format '" + f + "'"});
    want.insert(f);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> paths;
  auto put = [&](const std::string& name, const std::string& body) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    os << body;
    os.close();
    if (!os) throw std::runtime_error("write failed: " + path.string());
    paths.push_back(path.string());
  };
  if (want.count("json")) put(rec.command + ".json", record_json(rec));
  if (want.count("table") && !rec.table.columns.empty()) put(rec.command + ".csv", table_csv(rec.table));
  if (want.count("series"))
    for (const auto& s : rec.series) {
      std::string body = "#";
      for (const auto& c : s.columns) body += " " + c;
      body += "\n";
      for (const auto& row : s.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) body += (i ? " " : "") + format_double(row[i]);
        body += "\n";
      }
      put(s.name + ".dat", body);
    }
  return paths;
}

}  // namespace hnls::cli
