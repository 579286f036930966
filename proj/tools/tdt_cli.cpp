// tdt: command-line front end for the three-cavity Dicke solver.
//
// Exit codes: 0 success, 1 domain or numerical error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdt/tdt.hpp"

namespace {

using tdt::kPi;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string format = "text";
  bool degrees = false;
};

struct PointArgs {
  double lambda = 0.5;
  double gamma = 0.9;
  double theta = 0.0;
  double j_ratio = 0.1;
  double omega = 1.0;
  double Omega = 1.0;
};

double to_radians(double v, const Globals& g) { return g.degrees ? v * kPi / 180.0 : v; }

void add_point_options(CLI::App* cmd, PointArgs& a, bool with_lambda = true) {
  if (with_lambda) cmd->add_option("--lambda", a.lambda, "Dimensionless coupling")->capture_default_str();
  cmd->add_option("--gamma", a.gamma, "Anisotropy parameter")->capture_default_str();
  cmd->add_option("--theta", a.theta, "Hopping phase (radians unless --degrees)")->capture_default_str();
  cmd->add_option("--j-ratio", a.j_ratio, "Hopping strength J/omega")->capture_default_str();
  cmd->add_option("--omega", a.omega, "Cavity frequency")->capture_default_str();
  cmd->add_option("--Omega", a.Omega, "Atomic splitting")->capture_default_str();
}

tdt::ModelParams make_params(const PointArgs& a, const Globals& g) {
  tdt::ModelParams p{a.omega, a.Omega, a.lambda, a.gamma, a.j_ratio, to_radians(a.theta, g)};
  tdt::validate(p);
  return p;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// A record is an ordered list of fields, printed as an aligned table or as one JSON object.
class Record {
 public:
  Record& put(const std::string& key, Json value) {
    fields_.emplace_back(key, std::move(value));
    return *this;
  }

  void print(const Globals& g) const {
    if (g.format == "json") {
      Json obj = Json::object();
      for (const auto& [k, v] : fields_) obj[k] = v;
      std::cout << obj.dump() << '\n';
      return;
    }
    std::size_t width = 0;
    for (const auto& f : fields_) width = std::max(width, f.first.size());
    for (const auto& [k, v] : fields_) {
      std::cout << k << std::string(width - k.size() + 2, ' ');
      if (v.is_number_float()) std::cout << num(v.get<double>());
      else if (v.is_string()) std::cout << v.get<std::string>();
      else if (v.is_array()) {
        bool first = true;
        for (const auto& e : v) {
          std::cout << (first ? "" : " ") << (e.is_number_float() ? num(e.get<double>()) : e.dump());
          first = false;
        }
      } else std::cout << v.dump();
      std::cout << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, Json>> fields_;
};

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json critical_point_json(const tdt::boundaries::CriticalPoint& cp) {
  return Json{{"kind", tdt::boundaries::to_string(cp.kind)},
              {"gamma", cp.gamma},
              {"lambda", cp.lambda},
              {"theta", cp.theta},
              {"j_ratio", cp.j_ratio}};
}

// ---- boundary ---------------------------------------------------------------------------------

struct BoundaryArgs {
  std::string kind = "auto";
  PointArgs pt;
  int sign = 1;
  int n_starts = 32;
  std::uint64_t seed = 0;
};

void run_boundary(const BoundaryArgs& a, const Globals& g) {
  namespace b = tdt::boundaries;
  const double theta = tdt::reduce_angle(to_radians(a.pt.theta, g));
  const double j = a.pt.j_ratio;
  Record r;
  r.put("kind", a.kind);
  if (a.kind == "theta-c") {
    r.put("j_ratio", j).put("theta_c", b::theta_c(j));
    r.print(g);
    return;
  }
  std::optional<b::CriticalPoint> cp;
  if (a.kind == "tcp") cp = b::tcp(theta, j, false);
  else if (a.kind == "ctcp") cp = b::tcp(theta, j, true);
  else if (a.kind == "triple") cp = b::triple_point(a.pt.gamma, j, a.sign);
  else if (a.kind == "sr") cp = b::CriticalPoint{a.pt.gamma, b::sr_boundary_lambda(a.pt.gamma, theta, j), theta, b::CriticalKind::second_order_SR, j};
  else if (a.kind == "csr") cp = b::CriticalPoint{a.pt.gamma, b::csr_boundary_lambda(a.pt.gamma, theta, j), theta, b::CriticalKind::second_order_CSR, j};
  else if (a.kind == "auto") {
    if (b::second_order_valid(a.pt.gamma)) {
      cp = b::second_order_point(a.pt.gamma, theta, j);
    } else {
      b::FirstOrderOptions opt;
      opt.n_starts = a.n_starts;
      opt.seed = a.seed;
      const auto fo = b::first_order_lambda(a.pt.gamma, theta, j, opt);
      r.put("gamma", fo.point.gamma).put("lambda", fo.lambda).put("theta", fo.point.theta);
      r.put("j_ratio", j).put("order", "first");
      r.put("branch", b::to_string(fo.point.kind));
      r.put("landau_estimate", finite_or_null(fo.landau_estimate));
      r.put("delta_energy", fo.delta_energy).put("jump", fo.jump);
      r.print(g);
      return;
    }
  } else {
    throw UsageError("unknown --kind '" + a.kind + "'");
  }
  r.put("gamma", cp->gamma).put("lambda", cp->lambda).put("theta", cp->theta);
  r.put("j_ratio", cp->j_ratio).put("order", "second");
  r.put("branch", b::to_string(cp->kind));
  r.print(g);
}

// ---- spectrum ---------------------------------------------------------------------------------

void run_spectrum(const PointArgs& a, const Globals& g) {
  const auto p = make_params(a, g);
  const auto sp = tdt::normal_phase::spectrum(p);
  Record r;
  r.put("lambda", p.lambda).put("gamma", p.gamma).put("theta", p.theta).put("j_ratio", p.j_ratio);
  r.put("q", Json(std::vector<double>(sp.q_values.begin(), sp.q_values.end())));
  r.put("omega_q", Json(std::vector<double>(sp.omega_q.begin(), sp.omega_q.end())));
  r.put("epsilon_q", Json(std::vector<double>(sp.epsilon_q.begin(), sp.epsilon_q.end())));
  r.put("beta_q", Json(std::vector<double>(sp.beta_q.begin(), sp.beta_q.end())));
  const auto low = tdt::normal_phase::lowest_gap(sp);
  r.put("lowest_gap", low.value).put("lowest_q", low.q);
  r.put("e_ground_intensive", sp.e_ground_intensive);
  r.print(g);
}

// ---- minimize / current -----------------------------------------------------------------------

struct MinimizeArgs {
  PointArgs pt;
  int n_starts = 32;
  std::uint64_t seed = 0;
};

void run_minimize(const MinimizeArgs& a, const Globals& g, bool current_only) {
  const auto p = make_params(a.pt, g);
  const auto sol = tdt::meanfield::minimize_energy(p, a.n_starts, a.seed);
  if (!sol.converged)
    throw tdt::ConvergenceError("minimization did not converge (residual " + num(sol.residual) + ")");
  const auto ob = tdt::meanfield::observables(p, sol.order);
  Record r;
  r.put("lambda", p.lambda).put("gamma", p.gamma).put("theta", p.theta).put("j_ratio", p.j_ratio);
  r.put("phase", tdt::meanfield::to_string(sol.phase));
  if (current_only) {
    r.put("i_ph", ob.i_ph).put("theta_c", tdt::boundaries::theta_c(p.j_ratio));
    r.print(g);
    return;
  }
  std::vector<double> A, B;
  for (int n = 0; n < 3; ++n) {
    A.push_back(sol.order.A(n));
    B.push_back(sol.order.B(n));
  }
  r.put("energy", sol.energy).put("residual", sol.residual);
  r.put("A", Json(A)).put("B", Json(B));
  r.put("n_ph", ob.n_ph).put("i_ph", ob.i_ph);
  r.put("h_exp", Json(std::vector<double>(ob.h_exp.begin(), ob.h_exp.end())));
  r.print(g);
}

// ---- scaling ----------------------------------------------------------------------------------

struct ScalingArgs {
  std::string target = "beta";
  std::string point = "sr";
  PointArgs pt;
  std::optional<double> j_ratio;
  std::optional<double> l_min, l_max;
  int points = 13;
  int sign = 1;
  int n_starts = 32;
  std::uint64_t seed = 0;
};

void run_scaling(const ScalingArgs& a, const Globals& g) {
  namespace b = tdt::boundaries;
  namespace s = tdt::scaling;
  if (a.target != "beta" && a.target != "eta") throw UsageError("--target must be beta or eta");
  // The chiral gap reaches its linear regime only for weak hopping, so eta defaults to J = 0.01.
  const double j = a.j_ratio.value_or(a.target == "eta" ? 0.01 : 0.1);
  const double theta = to_radians(a.pt.theta, g);
  b::CriticalPoint cp;
  if (a.point == "tcp") cp = b::tcp(theta, j, false);
  else if (a.point == "ctcp") cp = b::tcp(theta, j, true);
  else if (a.point == "triple") cp = b::triple_point(a.pt.gamma, j, a.sign);
  else if (a.point == "sr" || a.point == "csr") {
    cp = b::second_order_point(a.pt.gamma, theta, j);
    const bool chiral = cp.kind == b::CriticalKind::second_order_CSR;
    if (chiral != (a.point == "csr"))
      throw tdt::DomainError("theta = " + num(theta) + " lies on the " + (chiral ? "csr" : "sr") +
                             " branch at j_ratio = " + num(j));
  } else {
    throw UsageError("--point must be sr, csr, tcp, ctcp or triple");
  }

  std::vector<double> grid = a.target == "beta" ? s::default_beta_grid() : s::default_eta_grid();
  if (a.l_min || a.l_max)
    grid = s::geometric_grid(a.l_min.value_or(grid.front()), a.l_max.value_or(grid.back()), a.points);
  else if (a.points != static_cast<int>(grid.size()))
    grid = s::geometric_grid(grid.front(), grid.back(), a.points);

  std::vector<s::ScalingFit> fits;
  if (a.target == "beta") fits.push_back(s::beta_exponent(cp, grid, {a.n_starts, a.seed}));
  else fits = s::eta_exponent(cp, grid);

  if (g.format == "json") {
    Json out{{"critical_point", critical_point_json(cp)}, {"target", a.target}, {"fits", Json::array()}};
    for (const auto& f : fits)
      out["fits"].push_back({{"target", s::to_string(f.target)}, {"exponent", f.exponent},
                             {"r_squared", f.r_squared}, {"q", f.q}, {"l_min", f.l_min},
                             {"l_max", f.l_max}, {"n_points", f.n_points}, {"accepted", f.accepted}});
    std::cout << out.dump() << '\n';
  } else {
    Record r;
    r.put("point", b::to_string(cp.kind)).put("gamma", cp.gamma).put("lambda", cp.lambda);
    r.put("theta", cp.theta).put("j_ratio", cp.j_ratio);
    for (const auto& f : fits) {
      const std::string k = s::to_string(f.target);
      r.put(k + ".exponent", f.exponent).put(k + ".r_squared", f.r_squared);
      if (a.target == "eta") r.put(k + ".q", f.q);
      r.put(k + ".accepted", f.accepted ? "yes" : "no");
    }
    r.put("l_range", Json(std::vector<double>{grid.front(), grid.back()}));
    r.print(g);
  }
}

// ---- sweep ------------------------------------------------------------------------------------

struct SweepArgs {
  std::string config_path;
  std::string output;
  std::vector<std::string> axes;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

void run_sweep(const SweepArgs& a, const Globals& g, bool format_given) {
  namespace sw = tdt::sweep;
  sw::SweepConfig cfg;
  if (!a.config_path.empty()) cfg = sw::load_config(a.config_path);
  if (!a.axes.empty()) cfg.axes.clear();
  for (const auto& ax : a.axes) sw::apply_setting(cfg, "axis", ax);
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sw::ConfigError("--set expects key=value, got '" + kv + "'");
    sw::apply_setting(cfg, sw::detail::trim(kv.substr(0, eq)), sw::detail::trim(kv.substr(eq + 1)));
  }
  if (a.seed) cfg.seed = *a.seed;
  if (format_given) cfg.format = g.format;
  if (g.degrees) {
    // Converted on input; the dataset header always records radians.
    cfg.theta = to_radians(cfg.theta, g);
    for (auto& ax : cfg.axes)
      if (ax.name == "theta") {
        ax.min = to_radians(ax.min, g);
        ax.max = to_radians(ax.max, g);
      }
  }
  cfg.output_path = a.output;
  sw::validate(cfg);
  if (cfg.output_path.empty() || cfg.output_path == "-") sw::run_sweep(cfg, std::cout, a.jobs);
  else sw::run_sweep(cfg, a.jobs);
}

unsigned default_jobs() {
  if (const char* env = std::getenv("TDT_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    throw UsageError(std::string("TDT_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field solver and sweep tool for the three-cavity Dicke triangle with Peierls-phase hopping"};
  app.set_version_flag("--version", std::string(tdt::kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Globals g;
  auto* fmt = app.add_option("--format", g.format, "Output format")
                  ->check(CLI::IsMember({"text", "json"}))
                  ->capture_default_str();
  app.add_flag("--degrees", g.degrees, "Read angles in degrees (output stays in radians)");

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Critical points and boundary lines");
  boundary->add_option("--kind", ba.kind, "sr, csr, tcp, ctcp, triple, theta-c, or auto")
      ->check(CLI::IsMember({"auto", "sr", "csr", "tcp", "ctcp", "triple", "theta-c"}))
      ->capture_default_str();
  add_point_options(boundary, ba.pt, false);
  boundary->add_option("--sign", ba.sign, "Sign of theta for --kind triple")->check(CLI::IsMember({1, -1}));
  boundary->add_option("--n-starts", ba.n_starts, "Multistart count (first-order search)");
  boundary->add_option("--seed", ba.seed, "Random seed (first-order search)");

  PointArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Normal-phase excitation spectrum");
  add_point_options(spectrum, sa);

  MinimizeArgs ma;
  auto* minimize = app.add_subcommand("minimize", "Mean-field ground state");
  add_point_options(minimize, ma.pt);
  minimize->add_option("--n-starts", ma.n_starts, "Multistart count")->capture_default_str();
  minimize->add_option("--seed", ma.seed, "Random seed")->capture_default_str();

  MinimizeArgs ca;
  ca.pt.lambda = 1.0;
  auto* current = app.add_subcommand("current", "Chiral photon current of the ground state");
  add_point_options(current, ca.pt);
  current->add_option("--n-starts", ca.n_starts, "Multistart count")->capture_default_str();
  current->add_option("--seed", ca.seed, "Random seed")->capture_default_str();

  ScalingArgs sca;
  auto* scaling = app.add_subcommand("scaling", "Critical exponent along the boundary normal");
  scaling->add_option("--target", sca.target, "beta (photon number) or eta (gap)")->capture_default_str();
  scaling->add_option("--point", sca.point, "sr, csr, tcp, ctcp or triple")->capture_default_str();
  scaling->add_option("--gamma", sca.pt.gamma, "Anisotropy (sr, csr, triple)")->capture_default_str();
  scaling->add_option("--theta", sca.pt.theta, "Hopping phase")->capture_default_str();
  scaling->add_option("--j-ratio", sca.j_ratio, "J/omega (default 0.1 for beta, 0.01 for eta)");
  scaling->add_option("--l-min", sca.l_min, "Smallest distance from the critical point");
  scaling->add_option("--l-max", sca.l_max, "Largest distance from the critical point");
  scaling->add_option("--points", sca.points, "Number of distances")->check(CLI::Range(3, 1000))->capture_default_str();
  scaling->add_option("--sign", sca.sign, "Sign of theta for --point triple")->check(CLI::IsMember({1, -1}));
  scaling->add_option("--n-starts", sca.n_starts, "Multistart count")->capture_default_str();
  scaling->add_option("--seed", sca.seed, "Random seed")->capture_default_str();

  SweepArgs swa;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep written as a dataset");
  sweep->add_option("-c,--config", swa.config_path, "Config file (key = value lines, or a dataset)");
  sweep->add_option("-o,--output", swa.output, "Output path ('-' or omitted: stdout)");
  sweep->add_option("--axis", swa.axes, "Axis as 'name min max steps' (repeatable)");
  sweep->add_option("--set", swa.sets, "Config override key=value (repeatable)");
  sweep->add_option("--seed", swa.seed, "Random seed");
  sweep->add_option("-j,--jobs", swa.jobs, "Worker threads (default: TDT_JOBS or 1)")->check(CLI::PositiveNumber);

  try {
    swa.jobs = default_jobs();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*boundary) run_boundary(ba, g);
    else if (*spectrum) run_spectrum(sa, g);
    else if (*minimize) run_minimize(ma, g, false);
    else if (*current) run_minimize(ca, g, true);
    else if (*scaling) run_scaling(sca, g);
    else if (*sweep) run_sweep(swa, g, fmt->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tdt::sweep::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tdt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}
