#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlasim/analysis.hpp"
#include "nlasim/common.hpp"
#include "nlasim/protocols.hpp"

namespace nlasim::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kCsvHeader =
    "scheme,tau,t,eta,distance_km,eps1,eps2,delta1,delta2,dark_prob,pnr,herald_policy,"
    "p,F,F_full,X,pop_vac,pop_one,pop_two";

// Flat option bag shared by every subcommand. Precedence: built-in defaults,
// then the JSON config file, then explicit command-line flags.
struct Options {
  std::string scheme = "end";  // sweep accepts a comma-separated list
  double tau = 0.5;
  double t = 0.5;
  double eta = 1.0;
  double distance_km = 0.0;
  bool eta_set = false;
  bool distance_set = false;
  double eps1 = 1.0;
  double eps2 = 1.0;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double dark_prob = 0.0;
  bool pnr = false;
  std::string herald_policy = "both_patterns";
  int cutoff = 3;
  double hom_visibility = 1.0;
  bool fold_char_into_p = false;
  double direct_fidelity = 0.98;
  std::string variable = "eta";
  std::string grid;                 // "start:stop:step" or "v1,v2,..."
  std::vector<double> grid_list;    // set when the config file gives an array
  std::string t_mode = "optimal";
  double loss_db_per_km = 0.2;
  std::string format = "json";      // run output: json or csv
  std::string out;                  // empty = stdout
  int threads = 0;                  // 0 = NLASIM_THREADS or 1
  unsigned long long seed = 1;      // reserved for sampling utilities
};

inline double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": could not parse number '" + text + "'");
  }
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, sep)) parts.push_back(piece);
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

// Grid syntax: inclusive range "start:stop:step" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("grid must not be empty");
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("grid range must look like start:stop:step");
    const double start = parse_number("grid", parts[0]);
    const double stop = parse_number("grid", parts[1]);
    const double step = parse_number("grid", parts[2]);
    if (step <= 0.0) throw ConfigError("grid step must be positive");
    if (stop < start) throw ConfigError("grid range must have stop >= start");
    const int n = int(std::floor((stop - start) / step + 1e-9));
    for (int k = 0; k <= n; ++k) values.push_back(start + k * step);
  } else {
    for (const auto& piece : split(text, ',')) values.push_back(parse_number("grid", piece));
  }
  return values;
}

inline std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> schemes;
  for (const auto& piece : split(text, ',')) schemes.push_back(scheme_from_string(piece));
  if (schemes.empty()) throw ConfigError("scheme list must not be empty");
  return schemes;
}

inline void apply_config_json(Options& o, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a single JSON object");
  static const std::set<std::string> known = {
      "scheme",       "tau",        "t",
      "eta",          "distance_km", "eps1",
      "eps2",         "delta1",     "delta2",
      "dark_prob",    "pnr",        "herald_policy",
      "cutoff",       "hom_visibility", "fold_char_into_p",
      "direct_fidelity", "variable", "grid",
      "t_mode",       "loss_db_per_km", "format",
      "out",          "threads",    "seed"};
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw ConfigError("unknown config key: " + item.key());

  auto number = [&](const char* key, double& target) {
    if (!j.contains(key)) return false;
    if (!j.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
    target = j.at(key).get<double>();
    return true;
  };
  auto text = [&](const char* key, std::string& target) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
    target = j.at(key).get<std::string>();
  };
  auto boolean = [&](const char* key, bool& target) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
    target = j.at(key).get<bool>();
  };
  auto integer = [&](const char* key, int& target, int minimum) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer())
      throw ConfigError(std::string(key) + " must be an integer");
    target = j.at(key).get<int>();
    if (target < minimum)
      throw ConfigError(std::string(key) + " must be at least " + std::to_string(minimum));
  };

  text("scheme", o.scheme);
  number("tau", o.tau);
  number("t", o.t);
  if (number("eta", o.eta)) o.eta_set = true;
  if (number("distance_km", o.distance_km)) o.distance_set = true;
  number("eps1", o.eps1);
  number("eps2", o.eps2);
  number("delta1", o.delta1);
  number("delta2", o.delta2);
  number("dark_prob", o.dark_prob);
  boolean("pnr", o.pnr);
  text("herald_policy", o.herald_policy);
  integer("cutoff", o.cutoff, 0);
  number("hom_visibility", o.hom_visibility);
  boolean("fold_char_into_p", o.fold_char_into_p);
  number("direct_fidelity", o.direct_fidelity);
  text("variable", o.variable);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.is_string()) {
      o.grid = g.get<std::string>();
    } else if (g.is_array()) {
      o.grid.clear();
      o.grid_list.clear();
      for (const auto& v : g) {
        if (!v.is_number()) throw ConfigError("grid array entries must be numbers");
        o.grid_list.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("grid must be a string or an array of numbers");
    }
  }
  text("t_mode", o.t_mode);
  number("loss_db_per_km", o.loss_db_per_km);
  text("format", o.format);
  text("out", o.out);
  integer("threads", o.threads, 1);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
      throw ConfigError("seed must be a nonnegative integer");
    o.seed = j.at("seed").get<unsigned long long>();
  }
}

inline void load_config_file(Options& o, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  apply_config_json(o, j);
}

// Build the full protocol configuration, naming the offending flat key on any
// range violation. scheme_name is passed separately because sweeps carry a
// scheme list in Options::scheme.
inline ProtocolConfig build_protocol_config(const Options& o, const std::string& scheme_name) {
  if (o.eps1 < 0.0 || o.eps1 > 1.0) throw ConfigError("eps1 must be in [0, 1]");
  if (o.eps2 < 0.0 || o.eps2 > 1.0) throw ConfigError("eps2 must be in [0, 1]");
  if (o.delta1 < 0.0 || o.delta1 > 1.0) throw ConfigError("delta1 must be in [0, 1]");
  if (o.delta2 < 0.0 || o.delta2 > 1.0) throw ConfigError("delta2 must be in [0, 1]");
  if (o.dark_prob < 0.0 || o.dark_prob >= 1.0) throw ConfigError("dark_prob must be in [0, 1)");
  if (o.eta_set && o.distance_set)
    throw ConfigError("eta and distance_km are mutually exclusive; give one of them");

  ProtocolConfig cfg;
  cfg.scheme = scheme_from_string(scheme_name);
  cfg.tau = o.tau;
  cfg.t = o.t;
  cfg.eta = o.distance_set ? eta_from_distance(o.distance_km, o.loss_db_per_km) : o.eta;
  cfg.source_alice.efficiency = o.eps1;
  cfg.source_bob.efficiency = o.eps2;
  cfg.herald_detector_1 = DetectorModel{o.delta1, o.dark_prob, o.pnr};
  cfg.herald_detector_2 = DetectorModel{o.delta1, o.dark_prob, o.pnr};
  cfg.char_detector_1 = DetectorModel{o.delta2, 0.0, false};
  cfg.char_detector_2 = DetectorModel{o.delta2, 0.0, false};
  cfg.herald_policy = herald_policy_from_string(o.herald_policy);
  cfg.cutoff = o.cutoff;
  cfg.hom_visibility = o.hom_visibility;
  cfg.fold_char_into_p = o.fold_char_into_p;
  cfg.direct_fidelity = o.direct_fidelity;
  cfg.validate();
  return cfg;
}

inline int resolve_threads(const Options& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("NLASIM_THREADS")) {
    const double v = parse_number("NLASIM_THREADS", env);
    if (v < 1.0 || v != std::floor(v) || v > 1024.0)
      throw ConfigError("NLASIM_THREADS must be a positive integer");
    return int(v);
  }
  return 1;
}

inline SweepRow row_from_result(const ProtocolConfig& cfg, const RunResult& r,
                                double loss_db_per_km) {
  SweepRow row;
  row.scheme = cfg.scheme;
  row.tau = cfg.tau;
  row.t = r.t_used;
  row.eta = cfg.eta;
  row.distance_km = distance_from_eta(cfg.eta, loss_db_per_km);
  row.eps1 = cfg.source_alice.efficiency;
  row.eps2 = cfg.source_bob.efficiency;
  row.delta1 = cfg.herald_detector_1.efficiency;
  row.delta2 = cfg.char_detector_2.efficiency;
  row.dark_prob = cfg.herald_detector_1.dark_click_prob;
  row.pnr = cfg.herald_detector_1.pnr;
  row.herald_policy = cfg.herald_policy;
  row.p = r.p;
  row.F = r.F;
  row.F_full = r.F_full;
  row.X = r.X;
  row.pop_vac = r.pop_vac;
  row.pop_one = r.pop_one;
  row.pop_two = r.pop_two;
  return row;
}

inline std::string csv_row(const SweepRow& r) {
  std::string s;
  auto add = [&](const std::string& field) {
    if (!s.empty()) s += ',';
    s += field;
  };
  add(to_string(r.scheme));
  add(fmt12(r.tau));
  add(fmt12(r.t));
  add(fmt12(r.eta));
  add(fmt12(r.distance_km));
  add(fmt12(r.eps1));
  add(fmt12(r.eps2));
  add(fmt12(r.delta1));
  add(fmt12(r.delta2));
  add(fmt12(r.dark_prob));
  add(r.pnr ? "true" : "false");
  add(to_string(r.herald_policy));
  add(fmt12(r.p));
  add(fmt12(r.F));
  add(fmt12(r.F_full));
  add(fmt12(r.X));
  add(fmt12(r.pop_vac));
  add(fmt12(r.pop_one));
  add(fmt12(r.pop_two));
  return s;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) os << csv_row(row) << '\n';
}

// Inverse of write_csv, used for round-trip checks and by downstream tooling.
inline std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: missing header line");
  if (line != kCsvHeader) throw ConfigError("csv: header does not match the sweep format");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 19)
      throw ConfigError("csv: expected 19 fields, got " + std::to_string(fields.size()));
    SweepRow r;
    r.scheme = scheme_from_string(fields[0]);
    r.tau = parse_number("tau", fields[1]);
    r.t = parse_number("t", fields[2]);
    r.eta = parse_number("eta", fields[3]);
    r.distance_km = parse_number("distance_km", fields[4]);
    r.eps1 = parse_number("eps1", fields[5]);
    r.eps2 = parse_number("eps2", fields[6]);
    r.delta1 = parse_number("delta1", fields[7]);
    r.delta2 = parse_number("delta2", fields[8]);
    r.dark_prob = parse_number("dark_prob", fields[9]);
    if (fields[10] != "true" && fields[10] != "false")
      throw ConfigError("csv: pnr must be true or false");
    r.pnr = fields[10] == "true";
    r.herald_policy = herald_policy_from_string(fields[11]);
    r.p = parse_number("p", fields[12]);
    r.F = parse_number("F", fields[13]);
    r.F_full = parse_number("F_full", fields[14]);
    r.X = parse_number("X", fields[15]);
    r.pop_vac = parse_number("pop_vac", fields[16]);
    r.pop_one = parse_number("pop_one", fields[17]);
    r.pop_two = parse_number("pop_two", fields[18]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// JSON scalars reject non-finite doubles; serialize those as strings.
inline ordered_json json_value(double v) {
  if (std::isfinite(v)) return v;
  return fmt12(v);
}

inline ordered_json run_json(const SweepRow& row, const RunResult& r) {
  ordered_json j;
  j["scheme"] = to_string(row.scheme);
  j["tau"] = json_value(row.tau);
  j["t"] = json_value(row.t);
  j["eta"] = json_value(row.eta);
  j["distance_km"] = json_value(row.distance_km);
  j["eps1"] = json_value(row.eps1);
  j["eps2"] = json_value(row.eps2);
  j["delta1"] = json_value(row.delta1);
  j["delta2"] = json_value(row.delta2);
  j["dark_prob"] = json_value(row.dark_prob);
  j["pnr"] = row.pnr;
  j["herald_policy"] = to_string(row.herald_policy);
  j["p"] = json_value(row.p);
  j["F"] = json_value(row.F);
  j["F_full"] = json_value(row.F_full);
  j["X"] = json_value(row.X);
  j["pop_vac"] = json_value(row.pop_vac);
  j["pop_one"] = json_value(row.pop_one);
  j["pop_two"] = json_value(row.pop_two);
  j["target_state"] = r.target_state_id;
  return j;
}

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ConfigError("out: cannot open '" + o.out + "' for writing");
  f << text;
}

inline int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = build_protocol_config(o, o.scheme);
  const RunResult r = run_protocol(cfg);
  if (r.degenerate) {
    err << "numerical error: degenerate run: herald probability below 1e-300\n";
    return 3;
  }
  const SweepRow row = row_from_result(cfg, r, o.loss_db_per_km);
  std::string text;
  if (o.format == "csv") {
    text = std::string(kCsvHeader) + "\n" + csv_row(row) + "\n";
  } else if (o.format == "json") {
    text = run_json(row, r).dump(2) + "\n";
  } else {
    throw ConfigError("format must be one of: json, csv (got '" + o.format + "')");
  }
  emit(o, out, text);
  return 0;
}

inline int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<Scheme> schemes = parse_schemes(o.scheme);
  SweepSpec spec;
  spec.variable = sweep_variable_from_string(o.variable);
  spec.grid = !o.grid.empty() ? parse_grid(o.grid) : o.grid_list;
  spec.base = build_protocol_config(o, to_string(schemes.front()));
  spec.schemes = schemes;
  spec.t_mode = t_mode_from_string(o.t_mode);
  spec.loss_db_per_km = o.loss_db_per_km;

  const std::vector<SweepRow> rows = run_sweep(spec, resolve_threads(o));
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].error.empty())
      err << "warning: row " << i + 1 << " (" << to_string(rows[i].scheme)
          << "): " << rows[i].error << '\n';
  std::ostringstream buf;
  write_csv(buf, rows);
  emit(o, out, buf.str());
  return 0;
}

inline int cmd_tune(const Options& o, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = build_protocol_config(o, o.scheme);
  const TuneResult tr = tune_gain_for_fidelity(cfg);
  if (tr.bracket_warning)
    err << "warning: interval endpoint beat the interior samples; used the grid fallback\n";
  ordered_json j;
  j["t_star"] = json_value(tr.t_star);
  j["F_star"] = json_value(tr.f_star);
  j["iterations"] = tr.iterations;
  emit(o, out, j.dump(2) + "\n");
  return 0;
}

inline int cmd_crossover(const Options& o, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = build_protocol_config(o, o.scheme);
  const CrossoverReport report =
      find_crossover(cfg, t_mode_from_string(o.t_mode), 1.0, 500.0, 0.01, o.loss_db_per_km);
  if (!report.found) {
    err << "numerical error: " << report.message << '\n';
    return 3;
  }
  ordered_json j;
  j["distance_km"] = json_value(report.distance_km);
  j["p_middle"] = json_value(report.p_middle);
  j["p_direct"] = json_value(report.p_direct);
  j["iterations"] = report.iterations;
  emit(o, out, j.dump(2) + "\n");
  return 0;
}

// Entry point shared by the binary and the tests. args excludes the program
// name. Exit codes: 0 success, 2 invalid configuration or usage, 3 numerical
// failure (truncation overflow, degenerate herald, missing crossover).
inline int execute(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heralded noiseless-linear-amplification simulator for single-rail "
               "entanglement distribution over lossy channels"};
  app.name("nlasim");
  app.require_subcommand(1);

  Options flagged;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; explicit flags override it");
    sub->add_option("--scheme", flagged.scheme,
                    "protocol scheme: end, middle or direct (sweep: comma-separated list)");
    sub->add_option("--tau", flagged.tau, "splitting of the shared state, in (0, 1)");
    sub->add_option("--t", flagged.t, "amplifier beam-splitter setting, in (0, 1)");
    sub->add_option("--eta", flagged.eta, "channel transmissivity, in (0, 1]");
    sub->add_option("--distance_km", flagged.distance_km,
                    "channel length; alternative to --eta");
    sub->add_option("--eps1", flagged.eps1, "Alice source efficiency");
    sub->add_option("--eps2", flagged.eps2, "Bob source efficiency");
    sub->add_option("--delta1", flagged.delta1, "herald detector efficiency");
    sub->add_option("--delta2", flagged.delta2, "characterization detector efficiency");
    sub->add_option("--dark_prob", flagged.dark_prob, "herald dark-click probability, in [0, 1)");
    sub->add_flag("--pnr,!--no_pnr", flagged.pnr, "photon-number-resolving herald detectors");
    sub->add_option("--herald_policy", flagged.herald_policy,
                    "single_pattern or both_patterns");
    sub->add_option("--cutoff", flagged.cutoff, "photon-number cutoff of the Fock basis");
    sub->add_option("--hom_visibility", flagged.hom_visibility,
                    "two-photon interference visibility at the heralding station");
    sub->add_flag("--fold_char_into_p,!--no_fold_char_into_p", flagged.fold_char_into_p,
                  "make p require photon retention after characterization loss");
    sub->add_option("--direct_fidelity", flagged.direct_fidelity,
                    "reported F of the direct baseline");
    sub->add_option("--loss_db_per_km", flagged.loss_db_per_km, "fiber attenuation");
    sub->add_option("--out", flagged.out, "write the result to this path instead of stdout");
    sub->add_option("--seed", flagged.seed, "random seed for sampling utilities");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "evaluate one configuration");
  add_common(run_cmd);
  run_cmd->add_option("--format", flagged.format, "output format: json or csv");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "evaluate a grid of configurations, emit CSV");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--variable", flagged.variable, "sweep variable: eta or distance_km");
  sweep_cmd->add_option("--grid", flagged.grid,
                        "grid points: start:stop:step (inclusive) or v1,v2,...");
  sweep_cmd->add_option("--t_mode", flagged.t_mode,
                        "gain choice per point: optimal, tuned or fixed");
  sweep_cmd->add_option("--threads", flagged.threads,
                        "worker threads (default: NLASIM_THREADS or 1)");

  CLI::App* tune_cmd =
      app.add_subcommand("tune", "maximize F over the amplifier setting t");
  add_common(tune_cmd);

  CLI::App* cross_cmd = app.add_subcommand(
      "crossover", "distance where the midpoint amplifier's p overtakes direct transmission");
  add_common(cross_cmd);
  cross_cmd->add_option("--t_mode", flagged.t_mode,
                        "gain choice per probe: optimal, tuned or fixed");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    auto used = [&](const std::string& name) { return active->count(name) > 0; };

    Options o;
    if (used("--config")) load_config_file(o, config_path);
    if (used("--scheme")) o.scheme = flagged.scheme;
    if (used("--tau")) o.tau = flagged.tau;
    if (used("--t")) o.t = flagged.t;
    if (used("--eta")) {
      o.eta = flagged.eta;
      o.eta_set = true;
    }
    if (used("--distance_km")) {
      o.distance_km = flagged.distance_km;
      o.distance_set = true;
    }
    if (used("--eps1")) o.eps1 = flagged.eps1;
    if (used("--eps2")) o.eps2 = flagged.eps2;
    if (used("--delta1")) o.delta1 = flagged.delta1;
    if (used("--delta2")) o.delta2 = flagged.delta2;
    if (used("--dark_prob")) o.dark_prob = flagged.dark_prob;
    if (used("--pnr")) o.pnr = flagged.pnr;
    if (used("--herald_policy")) o.herald_policy = flagged.herald_policy;
    if (used("--cutoff")) o.cutoff = flagged.cutoff;
    if (used("--hom_visibility")) o.hom_visibility = flagged.hom_visibility;
    if (used("--fold_char_into_p")) o.fold_char_into_p = flagged.fold_char_into_p;
    if (used("--direct_fidelity")) o.direct_fidelity = flagged.direct_fidelity;
    if (used("--loss_db_per_km")) o.loss_db_per_km = flagged.loss_db_per_km;
    if (used("--out")) o.out = flagged.out;
    if (used("--seed")) o.seed = flagged.seed;
    const std::string name = active->get_name();
    if (name == "run" && used("--format")) o.format = flagged.format;
    if (name == "sweep") {
      if (used("--variable")) o.variable = flagged.variable;
      if (used("--grid")) o.grid = flagged.grid;
      if (used("--threads")) {
        if (flagged.threads < 1) throw ConfigError("threads must be a positive integer");
        o.threads = flagged.threads;
      }
    }
    if ((name == "sweep" || name == "crossover") && used("--t_mode")) o.t_mode = flagged.t_mode;

    if (name == "run") return cmd_run(o, out, err);
    if (name == "sweep") return cmd_sweep(o, out, err);
    if (name == "tune") return cmd_tune(o, out, err);
    return cmd_crossover(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace nlasim::cli
