#include "twophase/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

namespace twophase {

namespace {

std::string_view trim(std::string_view s) {
  if (auto c = s.find_first_of("#;"); c != std::string_view::npos) s = s.substr(0, c);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view raw) {
  const auto s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(raw) + "' is not a number");
  }
  return v;
}

int to_int(std::string_view key, std::string_view raw) {
  const auto s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(raw) + "' is not an integer");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view raw) {
  const auto s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("key '" + std::string(key) + "': '" + std::string(raw) + "' is not a boolean");
}

template <class Parse>
auto enum_value(std::string_view key, std::string_view raw, Parse parse) {
  try {
    return parse(trim(raw));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + std::string(key) + "': " + e.what());
  }
}

Scenario parse_scenario(std::string_view s) {
  if (s == "A") return Scenario::A;
  if (s == "B") return Scenario::B;
  throw std::invalid_argument("scenario must be A or B");
}

Branch parse_branch(std::string_view s) {
  if (s == "imbibition") return Branch::imbibition;
  if (s == "drainage") return Branch::drainage;
  throw std::invalid_argument("branch must be imbibition or drainage");
}

using Setter = std::function<void(std::string_view key, std::string_view value)>;

std::map<std::string, Setter, std::less<>> setters(RunConfig& c) {
  auto num = [](double& f) { return Setter([&f](auto k, auto v) { f = to_double(k, v); }); };
  auto integer = [](int& f) { return Setter([&f](auto k, auto v) { f = to_int(k, v); }); };
  auto flag = [](bool& f) { return Setter([&f](auto k, auto v) { f = to_bool(k, v); }); };
  auto list = [](std::vector<double>& f) {
    return Setter([&f](auto k, auto v) {
      try {
        f = parse_double_list(std::string(trim(v)));
      } catch (const ConfigError& e) {
        throw ConfigError("key '" + std::string(k) + "': " + e.what());
      }
    });
  };
  auto& k = c.constitutive;
  auto& g = c.geometry;
  auto& t = c.tw;
  auto& r = c.riemann;
  auto& p = c.pde;
  auto& s = c.pde.solver;
  auto& m = c.compare;
  return {
      {"constitutive.Lambda_i", num(k.capillary.imbibition.Lambda)},
      {"constitutive.m_i", num(k.capillary.imbibition.m)},
      {"constitutive.Lambda_d", num(k.capillary.drainage.Lambda)},
      {"constitutive.m_d", num(k.capillary.drainage.m)},
      {"constitutive.tau", num(k.capillary.tau)},
      {"constitutive.M", num(k.M)},
      {"constitutive.N_g", num(k.N_g)},
      {"constitutive.q_i", num(k.q_i)},
      {"constitutive.q_d", num(k.q_d)},
      {"constitutive.hysteretic_permeability", flag(k.hysteretic_permeability)},
      {"constitutive.flux_preset",
       [&k](auto key, auto v) { k.flux_preset = enum_value(key, v, parse_flux_preset); }},
      {"geometry.S_B", num(g.S_B)},
      {"geometry.S_T", num(g.S_T)},
      {"geometry.base", [&g](auto key, auto v) { g.base = enum_value(key, v, parse_branch); }},
      {"tw.taus", list(t.taus)},
      {"tw.tau_min", num(t.tau_min)},
      {"tw.tau_max", num(t.tau_max)},
      {"tw.tau_count", integer(t.tau_count)},
      {"tw.rel_tol", num(t.rel_tol)},
      {"tw.eps", num(t.eps)},
      {"tw.xi_max", num(t.xi_max)},
      {"riemann.scenario",
       [&r](auto key, auto v) { r.scenario = enum_value(key, v, parse_scenario); }},
      {"riemann.t", num(r.t)},
      {"riemann.z_min", num(r.z_min)},
      {"riemann.z_max", num(r.z_max)},
      {"riemann.samples", integer(r.samples)},
      {"riemann.enforce_tau_bound", flag(r.enforce_tau_bound)},
      {"pde.z_in", num(p.z_in)},
      {"pde.z_out", num(p.z_out)},
      {"pde.dz", num(p.dz)},
      {"pde.dt", num(s.dt)},
      {"pde.L", num(s.L)},
      {"pde.tol", num(s.tol)},
      {"pde.max_iter", integer(s.max_iter)},
      {"pde.max_halvings", integer(s.max_halvings)},
      {"pde.smoothing_l", num(s.smoothing_l)},
      {"pde.t_end", num(s.t_end)},
      {"pde.scheme",
       [&s](auto key, auto v) { s.scheme = enum_value(key, v, parse_pressure_scheme); }},
      {"pde.advection",
       [&s](auto key, auto v) { s.advection = enum_value(key, v, parse_advection); }},
      {"pde.checkpoints", list(p.checkpoints)},
      {"compare.plateau_band", num(m.plateau_band)},
      {"compare.plateau_min_cells", integer(m.plateau_min_cells)},
      {"compare.level", num(m.level)},
      {"compare.t_first", num(m.t_first)},
  };
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  const auto& g = c.geometry;
  require(g.S_B > 0.0 && g.S_B < 1.0, "geometry.S_B must lie in (0,1)");
  require(g.S_T > 0.0 && g.S_T < 1.0, "geometry.S_T must lie in (0,1)");
  require(c.constitutive.capillary.tau >= 0.0, "constitutive.tau must be nonnegative");
  require(c.tw.tau_min > 0.0 && c.tw.tau_max > c.tw.tau_min, "tw.tau_min/tau_max must be ordered and positive");
  require(c.tw.tau_count >= 1, "tw.tau_count must be positive");
  require(c.riemann.t > 0.0 && c.riemann.samples >= 2 && c.riemann.z_max > c.riemann.z_min,
          "riemann sampling window is empty");
  const auto& s = c.pde.solver;
  require(s.t_end > 0.0, "pde.t_end must be positive");
  require(s.tol > 0.0 && s.max_iter > 0, "pde.tol and pde.max_iter must be positive");
  require(s.dt >= 0.0 && s.L >= 0.0, "pde.dt and pde.L must be nonnegative (0 selects the default)");
  require(c.pde.dz > 0.0, "pde.dz must be positive");
  require(c.compare.plateau_band > 0.0 && c.compare.plateau_min_cells > 0,
          "compare plateau settings must be positive");
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    out.push_back(to_double("list", rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

Model RunConfig::model() const {
  const auto& k = constitutive;
  PermeabilityModel perm;
  if (k.flux_preset != FluxPreset::brooks_corey) {
    perm = preset_permeability(k.flux_preset, k.q_i, k.q_d);
  } else {
    perm = preset_permeability(FluxPreset::brooks_corey, k.q_i,
                               k.hysteretic_permeability ? k.q_d : k.q_i);
  }
  try {
    return Model(k.capillary, perm, k.M, k.N_g);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[constitutive] ") + e.what());
  }
}

BaseState RunConfig::base() const {
  const Model m = model();
  return geometry.base == Branch::imbibition ? imbibition_base(m, geometry.S_B)
                                             : drainage_base(m, geometry.S_B);
}

PdeProblem RunConfig::pde_problem() const { return {model(), geometry.S_B, geometry.S_T}; }

SolverConfig RunConfig::solver_config() const {
  SolverConfig s = pde.solver;
  s.bc_mode = riemann.scenario;
  return s;
}

Grid RunConfig::grid() const {
  try {
    return Grid::with_spacing(pde.z_in, pde.z_out, pde.dz);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[pde] ") + e.what());
  }
}

RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  RunConfig cfg;
  const auto table = setters(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must live inside a section");
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      auto it = table.find(name);
      if (it == table.end()) throw ConfigError("unknown key '" + name + "'");
      it->second(name, node.data());
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c) {
  const auto list = [](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  const auto& k = c.constitutive;
  const auto& s = c.pde.solver;
  out.precision(17);
  out << "[constitutive]\n"
      << "Lambda_i = " << k.capillary.imbibition.Lambda << "\nm_i = " << k.capillary.imbibition.m
      << "\nLambda_d = " << k.capillary.drainage.Lambda << "\nm_d = " << k.capillary.drainage.m
      << "\ntau = " << k.capillary.tau << "\nM = " << k.M << "\nN_g = " << k.N_g
      << "\nq_i = " << k.q_i << "\nq_d = " << k.q_d
      << "\nhysteretic_permeability = " << (k.hysteretic_permeability ? "true" : "false")
      << "\nflux_preset = " << to_string(k.flux_preset) << "\n\n"
      << "[geometry]\nS_B = " << c.geometry.S_B << "\nS_T = " << c.geometry.S_T
      << "\nbase = " << to_string(c.geometry.base) << "\n\n"
      << "[tw]\ntaus = " << list(c.tw.taus) << "\ntau_min = " << c.tw.tau_min
      << "\ntau_max = " << c.tw.tau_max << "\ntau_count = " << c.tw.tau_count
      << "\nrel_tol = " << c.tw.rel_tol << "\neps = " << c.tw.eps << "\nxi_max = " << c.tw.xi_max
      << "\n\n"
      << "[riemann]\nscenario = " << (c.riemann.scenario == Scenario::A ? "A" : "B")
      << "\nt = " << c.riemann.t << "\nz_min = " << c.riemann.z_min << "\nz_max = " << c.riemann.z_max
      << "\nsamples = " << c.riemann.samples
      << "\nenforce_tau_bound = " << (c.riemann.enforce_tau_bound ? "true" : "false") << "\n\n"
      << "[pde]\nz_in = " << c.pde.z_in << "\nz_out = " << c.pde.z_out << "\ndz = " << c.pde.dz
      << "\ndt = " << s.dt << "\nL = " << s.L << "\ntol = " << s.tol << "\nmax_iter = " << s.max_iter
      << "\nmax_halvings = " << s.max_halvings << "\nsmoothing_l = " << s.smoothing_l
      << "\nt_end = " << s.t_end << "\nscheme = " << to_string(s.scheme)
      << "\nadvection = " << to_string(s.advection) << "\ncheckpoints = " << list(c.pde.checkpoints)
      << "\n\n"
      << "[compare]\nplateau_band = " << c.compare.plateau_band
      << "\nplateau_min_cells = " << c.compare.plateau_min_cells << "\nlevel = " << c.compare.level
      << "\nt_first = " << c.compare.t_first << "\n";
}

}  // namespace twophase
