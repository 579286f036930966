#pragma once

// Parameter sweeps over 1-3 of (lambda, gamma, theta) and their text/JSON datasets.
//
// Config format: one `key = value` per line, `#` starts a comment. Text datasets embed their
// resolved config as `#@ key = value` lines and JSON datasets carry it under "meta.config", so
// either kind of dataset is itself a valid config.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tdt/error.hpp"
#include "tdt/meanfield.hpp"
#include "tdt/model.hpp"
#include "tdt/normal_phase.hpp"
#include "tdt/version.hpp"

namespace tdt::sweep {

inline const std::vector<std::string> kAxisNames = {"lambda", "gamma", "theta"};
inline const std::vector<std::string> kOutputNames = {"order_params", "phase", "n_ph",
                                                      "i_ph",         "h_exp", "spectrum"};

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double value(int i) const { return min + (max - min) * i / static_cast<double>(steps - 1); }
};

struct SweepConfig {
  std::vector<Axis> axes;
  double lambda = 0.5;
  double gamma = 0.9;
  double theta = 0.0;
  double j_ratio = 0.1;
  double omega = 1.0;
  double Omega = 1.0;
  std::vector<std::string> outputs = {"order_params", "phase"};
  int n_starts = 32;
  std::uint64_t seed = 0;
  std::string format = "text";  // text | json
  std::string output_path;      // not part of the embedded header
};

/// Typed error for malformed configurations; the CLI reports it as a usage error.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
}

inline bool looks_numeric(const std::string& line) {
  std::istringstream is(line);
  std::string tok;
  is >> tok;
  if (tok == "nan" || tok == "-nan" || tok == "inf" || tok == "-inf") return true;
  char* end = nullptr;
  std::strtod(tok.c_str(), &end);
  return !tok.empty() && end != tok.c_str() && *end == '\0';
}

// Shortest round-trip formatting of a double; identical input gives identical bytes.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_data(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_double;
  if (key == "axis") {
    std::istringstream is(value);
    Axis a;
    std::string lo, hi, steps;
    if (!(is >> a.name >> lo >> hi >> steps))
      throw ConfigError("axis expects '<name> <min> <max> <steps>', got '" + value + "'");
    a.min = parse_double("axis", lo);
    a.max = parse_double("axis", hi);
    a.steps = static_cast<int>(detail::parse_int("axis", steps));
    cfg.axes.push_back(a);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_double(key, value);
  } else if (key == "theta") {
    cfg.theta = parse_double(key, value);
  } else if (key == "j_ratio") {
    cfg.j_ratio = parse_double(key, value);
  } else if (key == "omega") {
    cfg.omega = parse_double(key, value);
  } else if (key == "Omega") {
    cfg.Omega = parse_double(key, value);
  } else if (key == "outputs") {
    cfg.outputs.clear();
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
      item = detail::trim(item);
      if (!item.empty()) cfg.outputs.push_back(item);
    }
  } else if (key == "n_starts") {
    cfg.n_starts = static_cast<int>(detail::parse_int(key, value));
  } else if (key == "seed") {
    const long long s = detail::parse_int(key, value);
    if (s < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "format") {
    cfg.format = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

namespace detail {

// Reads the "meta.config" object of a JSON dataset.
inline SweepConfig config_from_json(const std::string& text, SweepConfig cfg) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  const auto* c = &doc;
  if (doc.contains("meta") && doc["meta"].contains("config")) c = &doc["meta"]["config"];
  try {
    if (c->contains("axes")) {
      cfg.axes.clear();
      for (const auto& a : (*c)["axes"])
        cfg.axes.push_back({a.at("name").get<std::string>(), a.at("min").get<double>(),
                            a.at("max").get<double>(), a.at("steps").get<int>()});
    }
    auto num = [&](const char* key, double& dst) {
      if (c->contains(key)) dst = (*c)[key].get<double>();
    };
    num("lambda", cfg.lambda);
    num("gamma", cfg.gamma);
    num("theta", cfg.theta);
    num("j_ratio", cfg.j_ratio);
    num("omega", cfg.omega);
    num("Omega", cfg.Omega);
    if (c->contains("outputs")) cfg.outputs = (*c)["outputs"].get<std::vector<std::string>>();
    if (c->contains("n_starts")) cfg.n_starts = (*c)["n_starts"].get<int>();
    if (c->contains("seed")) cfg.seed = (*c)["seed"].get<std::uint64_t>();
    if (c->contains("format")) cfg.format = (*c)["format"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad JSON config field: ") + e.what());
  }
  return cfg;
}

}  // namespace detail

/// Parses a config stream. Comment lines are skipped except `#@` lines, which carry settings;
/// bare numeric lines (dataset records) are skipped too. A JSON document (a JSON dataset or a
/// bare config object) is read through its "meta.config" object.
inline SweepConfig parse_config(std::istream& in, SweepConfig cfg = {}) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return detail::config_from_json(text, cfg);

  bool axes_reset = false;
  std::istringstream lines(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(lines, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.rfind("#@", 0) == 0) {
      line = detail::trim(line.substr(2));
    } else if (line[0] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (detail::looks_numeric(line)) continue;
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "axis" && !axes_reset) {
      cfg.axes.clear();
      axes_reset = true;
    }
    apply_setting(cfg, key, value);
  }
  return cfg;
}

inline SweepConfig load_config(const std::string& path, SweepConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in, std::move(cfg));
}

inline void validate(const SweepConfig& cfg) {
  if (cfg.axes.empty() || cfg.axes.size() > 3) throw ConfigError("a sweep needs 1 to 3 axes");
  for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
    const auto& a = cfg.axes[i];
    if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) == kAxisNames.end())
      throw ConfigError("unknown axis '" + a.name + "' (use lambda, gamma or theta)");
    if (a.steps < 2) throw ConfigError("axis '" + a.name + "' needs at least 2 steps");
    if (!std::isfinite(a.min) || !std::isfinite(a.max))
      throw ConfigError("axis '" + a.name + "' bounds must be finite");
    for (std::size_t k = 0; k < i; ++k)
      if (cfg.axes[k].name == a.name) throw ConfigError("axis '" + a.name + "' given twice");
  }
  for (const auto& o : cfg.outputs)
    if (std::find(kOutputNames.begin(), kOutputNames.end(), o) == kOutputNames.end())
      throw ConfigError("unknown output '" + o + "'");
  if (cfg.n_starts < 8) throw ConfigError("n_starts must be at least 8");
  if (cfg.format != "text" && cfg.format != "json")
    throw ConfigError("format must be 'text' or 'json'");
  ModelParams probe{cfg.omega, cfg.Omega, cfg.lambda, cfg.gamma, cfg.j_ratio, cfg.theta};
  try {
    tdt::validate(probe);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

/// Resolved config as `#@` header lines, in a fixed key order.
inline std::string header_config(const SweepConfig& cfg) {
  std::ostringstream os;
  for (const auto& a : cfg.axes)
    os << "#@ axis = " << a.name << ' ' << detail::fmt(a.min) << ' ' << detail::fmt(a.max) << ' '
       << a.steps << '\n';
  os << "#@ lambda = " << detail::fmt(cfg.lambda) << '\n';
  os << "#@ gamma = " << detail::fmt(cfg.gamma) << '\n';
  os << "#@ theta = " << detail::fmt(cfg.theta) << '\n';
  os << "#@ j_ratio = " << detail::fmt(cfg.j_ratio) << '\n';
  os << "#@ omega = " << detail::fmt(cfg.omega) << '\n';
  os << "#@ Omega = " << detail::fmt(cfg.Omega) << '\n';
  os << "#@ outputs = ";
  for (std::size_t i = 0; i < cfg.outputs.size(); ++i) os << (i ? "," : "") << cfg.outputs[i];
  os << '\n';
  os << "#@ n_starts = " << cfg.n_starts << '\n';
  os << "#@ seed = " << cfg.seed << '\n';
  os << "#@ format = " << cfg.format << '\n';
  return os.str();
}

inline bool wants(const SweepConfig& cfg, const std::string& output) {
  return std::find(cfg.outputs.begin(), cfg.outputs.end(), output) != cfg.outputs.end();
}

inline std::vector<std::string> columns(const SweepConfig& cfg) {
  std::vector<std::string> cols = {"lambda", "gamma", "theta", "energy", "converged"};
  // Fixed column order, independent of the order outputs were listed in.
  if (wants(cfg, "order_params")) cols.insert(cols.end(), {"A1", "A2", "A3", "B1", "B2", "B3"});
  if (wants(cfg, "phase")) cols.push_back("phase");
  if (wants(cfg, "n_ph")) cols.push_back("n_ph");
  if (wants(cfg, "i_ph")) cols.push_back("i_ph");
  if (wants(cfg, "h_exp")) cols.insert(cols.end(), {"h1", "h2", "h3"});
  if (wants(cfg, "spectrum")) cols.insert(cols.end(), {"eps_q0", "eps_q+", "eps_q-"});
  return cols;
}

inline std::size_t record_count(const SweepConfig& cfg) {
  std::size_t n = 1;
  for (const auto& a : cfg.axes) n *= static_cast<std::size_t>(a.steps);
  return n;
}

/// Parameters of grid point `index`; the first axis varies slowest.
inline ModelParams point(const SweepConfig& cfg, std::size_t index) {
  ModelParams p{cfg.omega, cfg.Omega, cfg.lambda, cfg.gamma, cfg.j_ratio, cfg.theta};
  std::size_t stride = record_count(cfg);
  for (const auto& a : cfg.axes) {
    stride /= static_cast<std::size_t>(a.steps);
    const int i = static_cast<int>((index / stride) % static_cast<std::size_t>(a.steps));
    const double v = a.value(i);
    if (a.name == "lambda") p.lambda = v;
    if (a.name == "gamma") p.gamma = v;
    if (a.name == "theta") p.theta = v;
  }
  return p;
}

/// One dataset row in column order.
inline std::vector<double> evaluate_point(const SweepConfig& cfg, std::size_t index) {
  const ModelParams p = point(cfg, index);
  const auto sol = meanfield::minimize_energy(p, cfg.n_starts, detail::splitmix64(cfg.seed + index));
  const auto ob = meanfield::observables(p, sol.order);
  std::vector<double> row = {p.lambda, p.gamma, p.theta, sol.energy, sol.converged ? 1.0 : 0.0};
  if (wants(cfg, "order_params")) {
    for (int n = 0; n < 3; ++n) row.push_back(sol.order.A(n));
    for (int n = 0; n < 3; ++n) row.push_back(sol.order.B(n));
  }
  if (wants(cfg, "phase")) row.push_back(static_cast<double>(sol.phase));
  if (wants(cfg, "n_ph")) row.push_back(ob.n_ph);
  if (wants(cfg, "i_ph")) row.push_back(ob.i_ph);
  if (wants(cfg, "h_exp"))
    for (double h : ob.h_exp) row.push_back(h);
  if (wants(cfg, "spectrum")) {
    try {
      const auto sp = normal_phase::spectrum(p);
      for (double e : sp.epsilon_q) row.push_back(e);
    } catch (const UnstableSpectrum&) {
      row.insert(row.end(), 3, std::nan(""));
    }
  }
  return row;
}

/// Evaluates every grid point with `jobs` workers; rows come back in grid order.
inline std::vector<std::vector<double>> evaluate(const SweepConfig& cfg, unsigned jobs = 1) {
  validate(cfg);
  const std::size_t n = record_count(cfg);
  std::vector<std::vector<double>> rows(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = evaluate_point(cfg, i);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline void write_text(std::ostream& os, const SweepConfig& cfg,
                       const std::vector<std::vector<double>>& rows) {
  os << "# tdt sweep " << kVersion << '\n';
  os << header_config(cfg);
  os << "# phase codes: NP 0, SR 1, CSR 2\n";
  os << "# records: " << rows.size() << '\n';
  os << '#';
  for (const auto& c : columns(cfg)) os << ' ' << c;
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << detail::fmt_data(r[i]);
    os << '\n';
  }
}

inline void write_json(std::ostream& os, const SweepConfig& cfg,
                       const std::vector<std::vector<double>>& rows) {
  nlohmann::ordered_json meta;
  meta["generator"] = std::string("tdt sweep ") + kVersion;
  auto& c = meta["config"];
  c["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : cfg.axes)
    c["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}});
  c["lambda"] = cfg.lambda;
  c["gamma"] = cfg.gamma;
  c["theta"] = cfg.theta;
  c["j_ratio"] = cfg.j_ratio;
  c["omega"] = cfg.omega;
  c["Omega"] = cfg.Omega;
  c["outputs"] = cfg.outputs;
  c["n_starts"] = cfg.n_starts;
  c["seed"] = cfg.seed;
  c["format"] = cfg.format;
  meta["phase_codes"] = {{"NP", 0}, {"SR", 1}, {"CSR", 2}};
  meta["columns"] = columns(cfg);
  os << "{\n\"meta\": " << meta.dump() << ",\n\"records\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json rec = nlohmann::json::array();
    for (double v : rows[i]) {
      if (std::isfinite(v)) rec.push_back(v);
      else rec.push_back(nullptr);
    }
    os << rec.dump() << (i + 1 < rows.size() ? ",\n" : "\n");
  }
  os << "]\n}\n";
}

/// Runs the sweep and writes the dataset in the configured format.
inline void run_sweep(const SweepConfig& cfg, std::ostream& os, unsigned jobs = 1) {
  const auto rows = evaluate(cfg, jobs);
  if (cfg.format == "json") write_json(os, cfg, rows);
  else write_text(os, cfg, rows);
}

inline void run_sweep(const SweepConfig& cfg, unsigned jobs = 1) {
  if (cfg.output_path.empty()) throw ConfigError("no output path given");
  validate(cfg);
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw Error("cannot write output file '" + cfg.output_path + "'");
  run_sweep(cfg, out, jobs);
  if (!out) throw Error("write to '" + cfg.output_path + "' failed");
}

}  // namespace tdt::sweep
