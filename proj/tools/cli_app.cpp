#include "cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "udw/correlators.hpp"
#include "udw/entanglement.hpp"
#include "udw/markovian.hpp"
#include "udw/nonmarkov.hpp"
#include "udw/validity.hpp"

namespace udw::cli {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// Thrown for exit code 2 (bad usage or parameters).
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Thrown for exit code 3.
struct validity_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double nonmarkov_g2atau_limit = 2.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

// Writes through a temporary file so readers never see a partial CSV.
void write_atomic(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw usage_error("cannot write " + tmp.string());
    f << text;
  }
  fs::rename(tmp, path);
}

json state_to_json(const Mat4c& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat4c state_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw usage_error("initial_state.custom: expected 4 rows");
  Mat4c m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw usage_error("initial_state.custom: expected 4 columns");
    for (int k = 0; k < 4; ++k) {
      const json& e = j[i][k];
      if (e.is_number())
        m(i, k) = e.get<double>();
      else if (e.is_array() && e.size() == 2)
        m(i, k) = cd(e[0].get<double>(), e[1].get<double>());
      else
        throw usage_error("initial_state.custom: entries are numbers or [re, im]");
    }
  }
  return m;
}

ordered_json params_json(const Params& p) {
  ordered_json j;
  j["g"] = p.g;
  j["a"] = p.a;
  j["omega"] = p.omega;
  j["L"] = p.L;
  j["epsilon"] = p.epsilon;
  return j;
}

ordered_json report_json(const Params& p, const validity::ValidityReport& r) {
  ordered_json j;
  j["params"] = params_json(p);
  j["threshold"] = r.threshold;
  j["overall"] = r.overall;
  ordered_json s = ordered_json::array();
  for (const auto& b : r.scalar_bounds) {
    ordered_json e;
    e["label"] = b.label;
    e["value"] = b.value;
    e["threshold"] = b.threshold;
    e["pass"] = b.pass;
    s.push_back(e);
  }
  j["scalar_bounds"] = s;
  ordered_json m = ordered_json::array();
  for (const auto& b : r.matrix_bounds) {
    ordered_json e;
    e["block"] = b.block == markovian::Block::X ? "X" : "O";
    e["max_abs_Y"] = b.max_y;
    e["max_abs_ZAinv"] = b.max_z_ainv;
    e["pass"] = b.pass;
    m.push_back(e);
  }
  j["matrix_bounds"] = m;
  j["regime_notes"] = r.regime_notes;
  j["failed"] = r.failed();
  return j;
}

// Parameter flags shared by every subcommand; unset values stay empty.
struct ParamFlags {
  std::optional<double> g, a, omega, L, aL, eps, aeps;
  std::string preset;
  std::string config;

  void attach(CLI::App* app) {
    app->add_option("--g", g, "coupling g");
    app->add_option("--a", a, "proper acceleration a");
    app->add_option("--omega", omega, "detector gap omega");
    app->add_option("--L", L, "proper separation L");
    app->add_option("--aL", aL, "dimensionless separation a*L (alternative to --L)");
    app->add_option("--eps", eps, "UV regulator epsilon");
    app->add_option("--aeps", aeps, "dimensionless regulator a*epsilon (default 0.01)");
    app->add_option("--preset", preset, "fig1 | fig2 | fig3 | deep")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "deep"}));
    app->add_option("--config", config, "JSON config (schema 1)");
  }
};

// Scenario defaults from a figure preset.
ScenarioConfig preset_config(const std::string& name) {
  ScenarioConfig c;
  c.params = Params{0.01, 1.0, 0.01, 0.25, 0.01};
  c.negativity = true;
  c.g2atau_max = 20.0;
  c.samples = 2001;
  c.solvers = {SolverTag::markov, SolverTag::markov_rwa};
  c.prefix = name;
  if (name == "fig1") {
    c.initial_state = "ground";
  } else if (name == "fig2") {
    c.initial_state = "down-up";
  } else if (name == "fig3") {
    c.initial_state = "bell-phi-plus";
    c.params.L = 2.0;
  } else if (name == "deep") {
    c.initial_state = "ground";
    c.params.L = 2.0;
    c.solvers = {SolverTag::markov, SolverTag::nonmarkov};
    c.g2atau_max = 200.0 * 1e-4;  // a tau = 200
    c.samples = 201;
    c.negativity = false;
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw usage_error("config: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw usage_error(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

// Resolves params from config/preset/flags; missing fields are usage errors.
ScenarioConfig resolve(const ParamFlags& f, bool need_L = true) {
  ScenarioConfig c;
  bool have_base = false;
  if (!f.config.empty()) {
    c = load_config(f.config);
    have_base = true;
  } else if (!f.preset.empty()) {
    c = preset_config(f.preset);
    have_base = true;
  }
  Params& p = c.params;
  auto need = [&](const std::optional<double>& v, double& dst, const char* name) {
    if (v)
      dst = *v;
    else if (!have_base)
      throw usage_error(std::string(name) + ": required");
  };
  need(f.g, p.g, "g");
  need(f.a, p.a, "a");
  need(f.omega, p.omega, "omega");
  if (f.L && f.aL) throw usage_error("L: give either --L or --aL");
  if (f.aL)
    p.L = *f.aL / p.a;
  else if (need_L)
    need(f.L, p.L, "L");
  else if (f.L)
    p.L = *f.L;
  if (f.eps && f.aeps) throw usage_error("epsilon: give either --eps or --aeps");
  if (f.eps)
    p.epsilon = *f.eps;
  else if (f.aeps)
    p.epsilon = *f.aeps / p.a;
  else if (!have_base)
    p.epsilon = 0.01 / p.a;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return c;
}

std::vector<SolverTag> parse_solvers(const std::vector<std::string>& names) {
  std::vector<SolverTag> out;
  for (const auto& n : names) {
    try {
      out.push_back(solver_tag_from_string(n));
    } catch (const std::invalid_argument& e) {
      throw usage_error(e.what());
    }
  }
  return out;
}

void enforce(const ScenarioConfig& c, std::ostream& err) {
  if (!c.enforce_validity) return;
  const auto r = validity::evaluate(c.params, c.validity_threshold);
  if (r.overall) return;
  std::ostringstream os;
  os << "validity: failed bounds:";
  for (const auto& l : r.failed()) os << " [" << l << "]";
  for (const auto& n : r.regime_notes) os << " (" << n << ")";
  err << os.str() << "\n";
  throw validity_failure(os.str());
}

// One solver's Schrodinger-picture states on the scenario grid.
TimeSeries solve(const ScenarioConfig& c, SolverTag tag) {
  const auto taus = c.taus();
  if (tag != SolverTag::nonmarkov) return markovian::evolve(c.params, c.initial(), taus, tag == SolverTag::markov_rwa);
  if (c.g2atau_max > nonmarkov_g2atau_limit * (1 + 1e-12))
    throw usage_error("nonmarkov: (g^2 a tau)_max exceeds the advisory limit 2");
  // a step that lands on every sample time and respects the resolution limit
  const Params& p = c.params;
  double hmax = 0.02 / p.a;
  if (p.omega > 0) hmax = std::min(hmax, 0.02 / p.omega);
  const double dt = taus[1] - taus[0];
  const auto per = static_cast<std::size_t>(std::ceil(dt / hmax - 1e-9));
  nonmarkov::NonMarkovConfig nc;
  nc.h = dt / per;
  nc.tau_max = taus.back();
  nc.sample_every = per;
  const auto sol = nonmarkov::integrate_nz(p, nc, to_interaction_picture(c.initial().matrix(), 0.0, p.omega));
  TimeSeries ts = nonmarkov::to_time_series(p, sol);
  ts.taus = taus;  // identical up to round-off; share the exact grid
  return ts;
}

std::string series_csv(const ScenarioConfig& c, const TimeSeries& ts) {
  std::ostringstream os;
  os << "# schema=" << csv_schema << "\n";
  const auto cols = csv_columns(c.negativity);
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << "\n";
  const double scale = c.params.g * c.params.g * c.params.a;
  for (std::size_t k = 0; k < ts.taus.size(); ++k) {
    os << fmt(ts.taus[k]) << "," << fmt(ts.taus[k] * scale);
    const Mat4c& m = ts.states[k].matrix();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) os << "," << fmt(m(i, j).real()) << "," << fmt(m(i, j).imag());
    if (c.negativity) os << "," << fmt(entanglement::negativity(ts.states[k]));
    os << "\n";
  }
  return os.str();
}

fs::path output_path(const ScenarioConfig& c, const std::string& stem) {
  return fs::path(c.out_dir) / (c.prefix + "_" + stem);
}

// ---- subcommands ----

int cmd_constants(const ParamFlags& f, std::ostream& out) {
  const ScenarioConfig c = resolve(f);
  const Params& p = c.params;
  ordered_json j;
  j["params"] = params_json(p);
  ordered_json k;
  std::vector<std::string> notes;
  k["c_s"] = correlators::c_s(p);
  if (p.L > 0) {
    k["c_x"] = correlators::c_x(p);
    k["k_x"] = correlators::k_x(p);
  } else {
    k["c_x"] = nullptr;
    k["k_x"] = nullptr;
    notes.push_back("L = 0: stacked trajectory; cross constants are undefined");
  }
  k["d_s_prime"] = correlators::d_s_prime(p);
  k["d_x_prime"] = p.L > 0 ? json(correlators::d_x_prime(p)) : json(nullptr);
  k["s_s_prime"] = correlators::s_s_prime();
  k["s_x_prime"] = p.L > 0 ? json(correlators::s_x_prime(p)) : json(nullptr);
  j["constants"] = k;
  ordered_json sd;
  sd["C"] = correlators::single_detector_C(p.omega, p);
  if (p.omega > 0) {
    sd["D"] = correlators::single_detector_D(p.omega, p);
  } else {
    sd["D"] = nullptr;
    notes.push_back("omega = 0: D(omega) is undefined");
  }
  j["single_detector"] = sd;
  j["notes"] = notes;
  out << j.dump(2) << "\n";
  return exit_ok;
}

int cmd_evolve(ScenarioConfig c, std::ostream& out, std::ostream& err) {
  c.validate();
  enforce(c, err);
  ordered_json written = ordered_json::array();
  for (SolverTag tag : c.solvers) {
    const TimeSeries ts = solve(c, tag);
    const fs::path path = output_path(c, to_string(tag) + ".csv");
    write_atomic(path, series_csv(c, ts));
    written.push_back(path.string());
  }
  ordered_json j;
  j["written"] = written;
  out << j.dump(2) << "\n";
  return exit_ok;
}

int cmd_compare(ScenarioConfig c, std::ostream& out, std::ostream& err) {
  c.validate();
  if (c.solvers.size() < 2) throw usage_error("solvers: compare needs at least two");
  enforce(c, err);
  std::vector<TimeSeries> runs;
  for (SolverTag tag : c.solvers) runs.push_back(solve(c, tag));
  const std::string ref = to_string(c.solvers[0]);

  std::ostringstream os;
  os << "# schema=" << csv_schema << "\n" << "tau,g2atau";
  for (std::size_t s = 1; s < runs.size(); ++s) {
    const std::string tag = to_string(c.solvers[s]) + "_vs_" + ref;
    os << ",max_abs_" << tag << ",delta_negativity_" << tag;
  }
  os << "\n";
  std::vector<entanglement::NegativitySeries> neg;
  for (const auto& r : runs) neg.push_back(entanglement::negativity_series(r));
  ordered_json summary;
  summary["schema"] = csv_schema;
  summary["params"] = params_json(c.params);
  summary["reference"] = ref;
  std::vector<double> max_gap(runs.size(), 0.0), max_dn(runs.size(), 0.0);
  std::vector<std::vector<double>> dn(runs.size());
  for (std::size_t s = 1; s < runs.size(); ++s) dn[s] = entanglement::delta_negativity(neg[s], neg[0]);
  const double scale = c.params.g * c.params.g * c.params.a;
  for (std::size_t k = 0; k < runs[0].taus.size(); ++k) {
    os << fmt(runs[0].taus[k]) << "," << fmt(runs[0].taus[k] * scale);
    for (std::size_t s = 1; s < runs.size(); ++s) {
      const double gap = (runs[s].states[k].matrix() - runs[0].states[k].matrix()).cwiseAbs().maxCoeff();
      max_gap[s] = std::max(max_gap[s], gap);
      max_dn[s] = std::max(max_dn[s], std::abs(dn[s][k]));
      os << "," << fmt(gap) << "," << fmt(dn[s][k]);
    }
    os << "\n";
  }
  ordered_json comps = ordered_json::array();
  for (std::size_t s = 1; s < runs.size(); ++s) {
    ordered_json e;
    e["solver"] = to_string(c.solvers[s]);
    e["max_abs_deviation"] = max_gap[s];
    e["max_abs_delta_negativity"] = max_dn[s];
    e["max_abs_deviation_over_g2"] = max_gap[s] / (c.params.g * c.params.g);
    comps.push_back(e);
  }
  summary["comparisons"] = comps;
  const fs::path csv = output_path(c, "compare.csv");
  write_atomic(csv, os.str());
  const fs::path js = output_path(c, "compare.summary.json");
  write_atomic(js, summary.dump(2) + "\n");
  ordered_json j;
  j["written"] = {csv.string(), js.string()};
  j["summary"] = summary;
  out << j.dump(2) << "\n";
  return exit_ok;
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

// "axis:lo:hi:n[:log]"
Axis parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 4 || parts.size() > 5) throw usage_error("sweep: expected axis:lo:hi:n[:log], got '" + text + "'");
  Axis ax;
  ax.name = parts[0];
  if (ax.name != "g" && ax.name != "omega_a" && ax.name != "aL" && ax.name != "aeps")
    throw usage_error("sweep: unknown axis '" + ax.name + "' (g | omega_a | aL | aeps)");
  double lo = 0, hi = 0;
  long n = 0;
  try {
    lo = std::stod(parts[1]);
    hi = std::stod(parts[2]);
    n = std::stol(parts[3]);
  } catch (const std::exception&) {
    throw usage_error("sweep: bad number in '" + text + "'");
  }
  const bool logscale = parts.size() == 5 && parts[4] == "log";
  if (parts.size() == 5 && !logscale) throw usage_error("sweep: last field must be 'log'");
  if (n <= 0) throw usage_error("sweep: empty sweep for axis " + ax.name);
  if (logscale && !(lo > 0 && hi > 0)) throw usage_error("sweep: log axis needs positive bounds");
  for (long k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : double(k) / (n - 1);
    ax.values.push_back(logscale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
  }
  return ax;
}

int cmd_validity(const ParamFlags& f, const std::vector<std::string>& sweeps, double threshold, bool enforce_flag,
                 const std::string& csv_out, std::ostream& out, std::ostream& err) {
  ScenarioConfig c = resolve(f);
  if (!(threshold > 0)) throw usage_error("threshold: must be positive");
  if (sweeps.empty()) {
    const auto r = validity::evaluate(c.params, threshold);
    out << report_json(c.params, r).dump(2) << "\n";
    if (enforce_flag && !r.overall) {
      err << "validity: failed bounds:";
      for (const auto& l : r.failed()) err << " [" << l << "]";
      err << "\n";
      return exit_validity;
    }
    return exit_ok;
  }
  std::vector<Axis> axes;
  for (const auto& s : sweeps) axes.push_back(parse_sweep(s));
  const Params& base = c.params;
  std::vector<std::string> labels;
  std::ostringstream os;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.values.size();
  bool any_fail = false;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t k = axes.size(); k-- > 0;) {
      idx[k] = rem % axes[k].values.size();
      rem /= axes[k].values.size();
    }
    double g = base.g, om_a = base.omega / base.a, aL = base.aL(), aeps = base.a * base.epsilon;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const double v = axes[k].values[idx[k]];
      if (axes[k].name == "g") g = v;
      if (axes[k].name == "omega_a") om_a = v;
      if (axes[k].name == "aL") aL = v;
      if (axes[k].name == "aeps") aeps = v;
    }
    const Params p{g, base.a, om_a * base.a, aL / base.a, aeps / base.a};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw usage_error(std::string("sweep point: ") + e.what());
    }
    const auto r = validity::evaluate(p, threshold);
    any_fail = any_fail || !r.overall;
    if (n == 0) {
      os << "# schema=" << csv_schema << "\n" << "g,omega_a,aL,aeps";
      for (const auto& b : r.scalar_bounds) {
        labels.push_back(b.label);
        os << "," << '"' << b.label << '"' << "," << '"' << b.label << " pass" << '"';
      }
      for (const auto& m : r.matrix_bounds) {
        const std::string t = m.block == markovian::Block::X ? "X" : "O";
        os << ",max_abs_Y_" << t << ",max_abs_ZAinv_" << t;
      }
      os << ",overall\n";
    }
    os << fmt(g) << "," << fmt(om_a) << "," << fmt(aL) << "," << fmt(aeps);
    for (const auto& l : labels) {
      const auto* b = r.find(l);
      if (b)
        os << "," << fmt(b->value) << "," << (b->pass ? 1 : 0);
      else
        os << ",,0";
    }
    for (const auto& m : r.matrix_bounds) os << "," << fmt(m.max_y) << "," << fmt(m.max_z_ainv);
    os << "," << (r.overall ? 1 : 0) << "\n";
  }
  if (csv_out.empty())
    out << os.str();
  else
    write_atomic(csv_out, os.str());
  if (enforce_flag && any_fail) {
    err << "validity: at least one sweep point fails\n";
    return exit_validity;
  }
  return exit_ok;
}

}  // namespace

void ScenarioConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  if (samples < 2) throw usage_error("samples: must be >= 2");
  if (!(g2atau_max > 0) || !std::isfinite(g2atau_max)) throw usage_error("g2atau_max: must be positive");
  if (solvers.empty()) throw usage_error("solvers: at least one required");
  if (!(validity_threshold > 0)) throw usage_error("validity_threshold: must be positive");
  if (initial_state == "custom" && !custom_state) throw usage_error("initial_state: custom matrix missing");
  try {
    (void)initial();
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("initial_state: ") + e.what());
  }
}

DensityMatrix4 ScenarioConfig::initial() const {
  if (initial_state == "custom") {
    if (!custom_state) throw std::invalid_argument("initial_state: custom matrix missing");
    return DensityMatrix4(*custom_state);
  }
  return states::by_name(initial_state);
}

std::vector<double> ScenarioConfig::taus() const {
  const double tau_max = g2atau_max / (params.g * params.g * params.a);
  std::vector<double> t(samples);
  for (std::size_t k = 0; k < samples; ++k) t[k] = tau_max * double(k) / double(samples - 1);
  return t;
}

bool operator==(const ScenarioConfig& l, const ScenarioConfig& r) {
  const bool custom_eq = l.custom_state.has_value() == r.custom_state.has_value() &&
                         (!l.custom_state || *l.custom_state == *r.custom_state);
  return l.params == r.params && l.initial_state == r.initial_state && custom_eq && l.solvers == r.solvers &&
         l.g2atau_max == r.g2atau_max && l.samples == r.samples && l.negativity == r.negativity &&
         l.enforce_validity == r.enforce_validity && l.validity_threshold == r.validity_threshold &&
         l.out_dir == r.out_dir && l.prefix == r.prefix;
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["schema"] = config_schema;
  j["params"] = params_json(c.params);
  if (c.initial_state == "custom" && c.custom_state)
    j["initial_state"] = {{"custom", state_to_json(*c.custom_state)}};
  else
    j["initial_state"] = c.initial_state;
  std::vector<std::string> s;
  for (auto t : c.solvers) s.push_back(to_string(t));
  j["solvers"] = s;
  j["tau_grid"] = {{"g2atau_max", c.g2atau_max}, {"samples", c.samples}};
  j["outputs"] = {{"negativity", c.negativity}};
  j["validity"] = {{"enforce", c.enforce_validity}, {"threshold", c.validity_threshold}};
  j["out_dir"] = c.out_dir;
  j["prefix"] = c.prefix;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  try {
    if (!j.is_object()) throw usage_error("config: expected a JSON object");
    if (j.value("schema", 0) != config_schema) throw usage_error("config: schema must be 1");
    ScenarioConfig c;
    const json& p = j.at("params");
    c.params = Params{p.at("g").get<double>(), p.at("a").get<double>(), p.at("omega").get<double>(),
                      p.at("L").get<double>(), p.at("epsilon").get<double>()};
    const json& st = j.at("initial_state");
    if (st.is_string()) {
      c.initial_state = st.get<std::string>();
    } else {
      c.initial_state = "custom";
      c.custom_state = state_from_json(st.at("custom"));
    }
    std::vector<std::string> solvers = j.value("solvers", std::vector<std::string>{"markov"});
    c.solvers = parse_solvers(solvers);
    if (j.contains("tau_grid")) {
      c.g2atau_max = j["tau_grid"].value("g2atau_max", c.g2atau_max);
      c.samples = j["tau_grid"].value("samples", c.samples);
    }
    if (j.contains("outputs")) c.negativity = j["outputs"].value("negativity", c.negativity);
    if (j.contains("validity")) {
      c.enforce_validity = j["validity"].value("enforce", c.enforce_validity);
      c.validity_threshold = j["validity"].value("threshold", c.validity_threshold);
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    c.prefix = j.value("prefix", c.prefix);
    return c;
  } catch (const json::exception& e) {
    throw usage_error(std::string("config: ") + e.what());
  }
}

std::vector<std::string> csv_columns(bool negativity) {
  std::vector<std::string> cols{"tau", "g2atau"};
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      cols.push_back("rho_re_" + std::to_string(i) + std::to_string(j));
      cols.push_back("rho_im_" + std::to_string(i) + std::to_string(j));
    }
  if (negativity) cols.push_back("negativity");
  return cols;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two accelerated qubits coupled to a massless scalar field", "udw_cli"};
  app.require_subcommand(1);

  ParamFlags cf, ef, vf, pf;
  auto* constants = app.add_subcommand("constants", "correlator constants as JSON");
  cf.attach(constants);

  // evolve and compare share the scenario flags
  struct ScenarioFlags {
    ParamFlags p;
    std::string state;
    std::vector<std::string> solvers;
    std::optional<double> g2at_max;
    std::optional<std::size_t> samples;
    std::string out_dir, prefix;
    bool negativity = false, enforce = false;
    std::optional<double> threshold;
    bool dump_config = false;
  } es, ps;
  auto scenario = [&](CLI::App* sub, ScenarioFlags& s) {
    s.p.attach(sub);
    sub->add_option("--state", s.state, "ground | up-up | down-up | bell-phi-plus | maximally-mixed");
    sub->add_option("--solvers", s.solvers, "markov, markov-rwa, nonmarkov")->delimiter(',');
    sub->add_option("--g2at-max", s.g2at_max, "horizon in units of g^2 a tau");
    sub->add_option("--samples", s.samples, "number of time samples (>= 2)");
    sub->add_option("--out-dir", s.out_dir, "output directory");
    sub->add_option("--prefix", s.prefix, "output file prefix");
    sub->add_flag("--negativity", s.negativity, "append the negativity column");
    sub->add_flag("--enforce-validity", s.enforce, "exit 3 if any validity bound fails");
    sub->add_option("--threshold", s.threshold, "validity threshold (default 0.1)");
    sub->add_flag("--dump-config", s.dump_config, "print the resolved JSON config and exit");
  };
  auto* evolve = app.add_subcommand("evolve", "write CSV time series");
  scenario(evolve, es);
  auto* compare = app.add_subcommand("compare", "write solver-deviation CSV and summary");
  scenario(compare, ps);

  auto* validity_cmd = app.add_subcommand("validity", "Markovian-validity report");
  vf.attach(validity_cmd);
  std::vector<std::string> sweeps;
  double threshold = 0.1;
  bool venforce = false;
  std::string vcsv;
  validity_cmd->add_option("--sweep", sweeps, "axis:lo:hi:n[:log], axis in g | omega_a | aL | aeps");
  validity_cmd->add_option("--threshold", threshold, "threshold for every bound");
  validity_cmd->add_flag("--enforce-validity", venforce, "exit 3 on failure");
  validity_cmd->add_option("--csv", vcsv, "write the sweep grid here instead of stdout");

  auto build_scenario = [&](const ScenarioFlags& s) {
    ScenarioConfig c = resolve(s.p);
    if (!s.state.empty()) {
      c.initial_state = s.state;
      c.custom_state.reset();
    }
    if (!s.solvers.empty()) c.solvers = parse_solvers(s.solvers);
    if (s.g2at_max) c.g2atau_max = *s.g2at_max;
    if (s.samples) c.samples = *s.samples;
    if (!s.out_dir.empty()) c.out_dir = s.out_dir;
    if (!s.prefix.empty()) c.prefix = s.prefix;
    if (s.negativity) c.negativity = true;
    if (s.enforce) c.enforce_validity = true;
    if (s.threshold) c.validity_threshold = *s.threshold;
    c.validate();
    return c;
  };

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (constants->parsed()) return cmd_constants(cf, out);
    if (validity_cmd->parsed()) return cmd_validity(vf, sweeps, threshold, venforce, vcsv, out, err);
    ScenarioFlags& s = evolve->parsed() ? es : ps;
    const ScenarioConfig c = build_scenario(s);
    if (s.dump_config) {
      out << to_json(c).dump(2) << "\n";
      return exit_ok;
    }
    return evolve->parsed() ? cmd_evolve(c, out, err) : cmd_compare(c, out, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (const usage_error& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (const validity_failure&) {
    return exit_validity;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const unsupported_regime& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace udw::cli
