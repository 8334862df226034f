#include "nlslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "experiments.hpp"
#include "nlslab/errors.hpp"

#ifndef NLSLAB_VERSION
#define NLSLAB_VERSION "0.0.0"
#endif

namespace nlslab {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object, remembering which were consumed so the
// rest can be rejected.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string sub(const std::string& key) const { return path_ == "$" ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(sub(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(sub(key), "expected a finite number");
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(sub(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(sub(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(sub(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(sub(it.key()), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

cplx read_amplitude(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path, "expected a number or [re, im]");
}

ForcingSpec read_forcing(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1)
    throw ConfigError(path, "expected exactly one of constant, modes, steady_compatible");
  ForcingSpec f;
  const auto& [key, v] = *j.items().begin();
  const std::string p = path + "." + key;
  if (key == "constant") {
    f.kind = ForcingSpec::Kind::constant;
    f.a = read_amplitude(v, p);
  } else if (key == "steady_compatible") {
    f.kind = ForcingSpec::Kind::steady_compatible;
    f.a = read_amplitude(v, p);
  } else if (key == "modes") {
    f.kind = ForcingSpec::Kind::modes;
    if (!v.is_array()) throw ConfigError(p, "expected a list of [k, re, im]");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& e = v[i];
      const std::string q = p + "[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() || !e[2].is_number())
        throw ConfigError(q, "expected [k, re, im]");
      f.modes.push_back({e[0].get<int>(), e[1].get<double>(), e[2].get<double>()});
    }
  } else {
    throw ConfigError(p, "unknown forcing kind");
  }
  return f;
}

json forcing_to_json(const ForcingSpec& f) {
  auto amp = [](cplx a) { return a.imag() == 0 ? json(a.real()) : json::array({a.real(), a.imag()}); };
  switch (f.kind) {
    case ForcingSpec::Kind::constant:
      return {{"constant", amp(f.a)}};
    case ForcingSpec::Kind::steady_compatible:
      return {{"steady_compatible", amp(f.a)}};
    case ForcingSpec::Kind::modes: {
      json m = json::array();
      for (const auto& e : f.modes) m.push_back({e.k, e.re, e.im});
      return {{"modes", m}};
    }
  }
  return nullptr;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema"] = config_schema;
  j["experiment"] = to_string(c.experiment);
  j["grid"] = {{"L", c.grid.L}, {"n", c.grid.n}, {"n_phys", c.grid.n_phys}};
  j["params"] = {{"gamma", c.gamma}, {"mu", c.mu}, {"m", c.m}, {"forcing", forcing_to_json(c.forcing)}};
  j["scheme"] = {{"dt", c.scheme.dt}, {"scheme", to_string(c.scheme.scheme)}, {"sample_every", c.scheme.sample_every}};
  j["seeds"] = c.seeds;
  j["times"] = {{"spinup", c.spinup}, {"window", c.window}};
  j["wmap"] = {{"spinup_k", c.wmap.spinup_k},
               {"tol_converged", c.wmap.tol_converged},
               {"max_restarts", c.wmap.max_restarts},
               {"certify", c.wmap.certify}};
  j["form"] = {{"mode", c.form_mode}, {"amplitude", c.form_amplitude}, {"steps", c.form_steps},
               {"dt_form", c.form_dt}};
  j["bounds"] = {{"c", c.agmon_c ? json(*c.agmon_c) : json(nullptr)}, {"xi", c.xi}, {"v_X", c.v_X}};
  j["bounds"]["c_override"] = json::object();
  for (const auto& [k, v] : c.c_override) j["bounds"]["c_override"][k] = v;
  j["modes"] = {{"m_values", c.modes_m_values}};
  const Tolerances& t = c.tol;
  j["tolerances"] = {{"sync_floor", t.sync_floor},       {"sync_horizon", t.sync_horizon},
                     {"fixed_point", t.fixed_point},     {"steady_fixed_point", t.steady_fixed_point},
                     {"forgetting", t.forgetting},
                     {"form_residual", t.form_residual}, {"collinearity", t.collinearity},
                     {"balance", t.balance}};
  j["output"] = c.output;
  j["allow_conservative"] = c.allow_conservative;
  return j;
}

void write_manifest(const std::string& dir, const RunManifest& m) {
  json a = json::array();
  for (const auto& x : m.assertions) a.push_back({{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
  json cfg;
  try {
    cfg = json::parse(m.config_json);
  } catch (const json::exception&) {
    cfg = m.config_json;
  }
  json j = {{"schema", "nlslab.manifest/1"},
            {"config", cfg},
            {"version", m.version},
            {"wall_time", m.wall_time},
            {"files", m.files},
            {"assertions", a},
            {"error", m.error},
            {"exit_code", m.exit_code}};
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace

std::string version_string() { return NLSLAB_VERSION; }

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::simulate: return "simulate";
    case Experiment::steady: return "steady";
    case Experiment::nudge: return "nudge";
    case Experiment::wmap: return "wmap";
    case Experiment::form: return "form";
    case Experiment::bounds: return "bounds";
    case Experiment::modes: return "modes";
    case Experiment::verify: return "verify";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : {Experiment::simulate, Experiment::steady, Experiment::nudge, Experiment::wmap, Experiment::form,
                       Experiment::bounds, Experiment::modes, Experiment::verify})
    if (to_string(e) == s) return e;
  throw InvalidArgument("unknown experiment: " + s);
}

Field forcing_from_spec(const ForcingSpec& spec, const SpectralGrid& grid, double gamma) {
  switch (spec.kind) {
    case ForcingSpec::Kind::constant:
      return Field::constant(grid, spec.a);
    case ForcingSpec::Kind::steady_compatible:
      return Field::constant(grid, std::norm(spec.a) * spec.a + cplx(0, gamma) * spec.a);
    case ForcingSpec::Kind::modes: {
      Field f(grid);
      for (const auto& e : spec.modes) {
        if (std::abs(e.k) > grid.n) throw InvalidArgument("forcing mode " + std::to_string(e.k) + " exceeds n");
        f[e.k] += cplx(e.re, e.im);
      }
      return f;
    }
  }
  throw InvalidArgument("bad forcing spec");
}

NlsParams ExperimentConfig::params() const {
  NlsParams p;
  p.gamma = gamma;
  p.f = forcing_from_spec(forcing, grid, gamma);
  p.mu = mu;
  p.m = m;
  p.diagnostic = allow_conservative;
  return p;
}

void ExperimentConfig::validate() const {
  if (m < 0 || m > grid.n) throw ConfigError("params.m", "must lie in [0, grid.n]");
  if (!(gamma >= 0)) throw ConfigError("params.gamma", "must be >= 0");
  if (!(mu >= 0)) throw ConfigError("params.mu", "must be >= 0");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (!(spinup >= 0) || !(window > 0)) throw ConfigError("times", "need spinup >= 0 and window > 0");
  try {
    scheme.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("scheme", e.what());
  }
  Field f;
  try {
    f = forcing_from_spec(forcing, grid, gamma);
  } catch (const InvalidArgument& e) {
    throw ConfigError("params.forcing", e.what());
  }
  const bool conservative = gamma == 0 || f.is_zero();
  if (conservative && !allow_conservative && experiment != Experiment::bounds)
    throw ConfigError("params", "gamma = 0 or f = 0 requires --allow-conservative");
  if (!(form_amplitude >= 0) || std::abs(form_mode) > m) throw ConfigError("form", "mode must satisfy |k| <= m");
  if (form_steps < 0 || !(form_dt > 0)) throw ConfigError("form", "need steps >= 0 and dt_form > 0");
  if (agmon_c && !(*agmon_c > 0)) throw ConfigError("bounds.c", "must be positive");
  for (const auto& [k, v] : c_override)
    if (!(v > 0)) throw ConfigError("bounds.c_override." + k, "must be positive");
  if (!(xi > 0 && xi < 0.25)) throw ConfigError("bounds.xi", "must lie in (0, 1/4)");
  if (!(v_X >= 0)) throw ConfigError("bounds.v_X", "must be >= 0");
  for (int v : modes_m_values)
    if (v < 0 || v > grid.n) throw ConfigError("modes.m_values", "entries must lie in [0, grid.n]");
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("$", e.what());
  }
  ExperimentConfig c;
  Reader top(j, "$");
  std::string schema = config_schema;
  top.string("schema", schema);
  if (schema != config_schema) throw ConfigError("schema", std::string("expected \"") + config_schema + "\"");
  std::string exp = to_string(c.experiment);
  top.string("experiment", exp);
  try {
    c.experiment = experiment_from_string(exp);
  } catch (const InvalidArgument& e) {
    throw ConfigError("experiment", e.what());
  }

  double L = c.grid.L;
  int n = 32, n_phys = 0;
  if (const json* g = top.get("grid")) {
    Reader r(*g, "grid");
    r.number("L", L);
    r.integer("n", n);
    r.integer("n_phys", n_phys);
    r.finish();
  }
  try {
    c.grid = SpectralGrid::make(L, n, n_phys);
  } catch (const InvalidArgument& e) {
    throw ConfigError("grid", e.what());
  }

  c.forcing.kind = ForcingSpec::Kind::modes;
  c.forcing.modes = {{-1, 1 / std::sqrt(3.0), 0}, {0, 1 / std::sqrt(3.0), 0}, {1, 1 / std::sqrt(3.0), 0}};
  if (const json* p = top.get("params")) {
    Reader r(*p, "params");
    r.number("gamma", c.gamma);
    r.number("mu", c.mu);
    r.integer("m", c.m);
    if (const json* f = r.get("forcing")) c.forcing = read_forcing(*f, "params.forcing");
    r.finish();
  }
  if (const json* s = top.get("scheme")) {
    Reader r(*s, "scheme");
    r.number("dt", c.scheme.dt);
    std::string name = to_string(c.scheme.scheme);
    r.string("scheme", name);
    try {
      c.scheme.scheme = scheme_from_string(name);
    } catch (const InvalidArgument& e) {
      throw ConfigError("scheme.scheme", e.what());
    }
    r.integer("sample_every", c.scheme.sample_every);
    r.finish();
  }
  if (const json* s = top.get("seeds")) {
    if (!s->is_array()) throw ConfigError("seeds", "expected a list of non-negative integers");
    c.seeds.clear();
    for (std::size_t i = 0; i < s->size(); ++i) {
      if (!(*s)[i].is_number_unsigned()) throw ConfigError("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
      c.seeds.push_back((*s)[i].get<std::uint64_t>());
    }
  }
  if (const json* t = top.get("times")) {
    Reader r(*t, "times");
    r.number("spinup", c.spinup);
    r.number("window", c.window);
    r.finish();
  }
  c.wmap.scheme = c.scheme;
  if (const json* w = top.get("wmap")) {
    Reader r(*w, "wmap");
    r.number("spinup_k", c.wmap.spinup_k);
    r.number("tol_converged", c.wmap.tol_converged);
    r.integer("max_restarts", c.wmap.max_restarts);
    r.boolean("certify", c.wmap.certify);
    r.finish();
  }
  try {
    c.wmap.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("wmap", e.what());
  }
  if (const json* f = top.get("form")) {
    Reader r(*f, "form");
    r.integer("mode", c.form_mode);
    r.number("amplitude", c.form_amplitude);
    r.integer("steps", c.form_steps);
    r.number("dt_form", c.form_dt);
    r.finish();
  }
  if (const json* b = top.get("bounds")) {
    Reader r(*b, "bounds");
    if (const json* v = r.get("c")) {
      if (v->is_number()) c.agmon_c = v->get<double>();
      else if (!v->is_null()) throw ConfigError("bounds.c", "expected a number or null");
    }
    r.number("xi", c.xi);
    r.number("v_X", c.v_X);
    if (const json* o = r.get("c_override")) {
      Reader ro(*o, "bounds.c_override");
      for (const std::string& k : c_override_keys()) {
        if (!ro.has(k)) continue;
        double v = 0;
        ro.number(k, v);
        c.c_override[k] = v;
      }
      ro.finish();
    }
    r.finish();
  }
  if (const json* m = top.get("modes")) {
    Reader r(*m, "modes");
    if (const json* v = r.get("m_values")) {
      if (!v->is_array()) throw ConfigError("modes.m_values", "expected a list of integers");
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number_integer()) throw ConfigError("modes.m_values[" + std::to_string(i) + "]", "expected an integer");
        c.modes_m_values.push_back((*v)[i].get<int>());
      }
    }
    r.finish();
  }
  if (const json* t = top.get("tolerances")) {
    Reader r(*t, "tolerances");
    r.number("sync_floor", c.tol.sync_floor);
    r.number("sync_horizon", c.tol.sync_horizon);
    r.number("fixed_point", c.tol.fixed_point);
    r.number("steady_fixed_point", c.tol.steady_fixed_point);
    r.number("forgetting", c.tol.forgetting);
    r.number("form_residual", c.tol.form_residual);
    r.number("collinearity", c.tol.collinearity);
    r.number("balance", c.tol.balance);
    r.finish();
  }
  top.string("output", c.output);
  top.boolean("allow_conservative", c.allow_conservative);
  top.finish();

  c.validate();
  c.json_text = config_to_json(c).dump(2);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string with_override(const std::string& json_text, const std::string& key, double value) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("$", e.what());
  }
  json* node = &j;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty() || !node->is_object() || !node->contains(part)) throw ConfigError(key, "no such configuration key");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (node->is_number_integer()) {
    if (value != std::floor(value)) throw ConfigError(key, "expected an integer value");
    *node = static_cast<long long>(value);
  } else if (node->is_number() || node->is_null()) {
    *node = value;
  } else {
    throw ConfigError(key, "only numeric keys can be swept");
  }
  return j.dump(2);
}

RunManifest run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.config_json = cfg.json_text.empty() ? config_to_json(cfg).dump(2) : cfg.json_text;
  m.version = version_string();
  detail::RunContext ctx(cfg.output);
  try {
    std::filesystem::create_directories(cfg.output);
  } catch (const std::filesystem::filesystem_error& e) {
    m.error = e.what();
    m.exit_code = 2;
    return m;
  }
  try {
    cfg.validate();
    detail::run_experiment(cfg, ctx);
    m.exit_code = std::all_of(ctx.assertions.begin(), ctx.assertions.end(), [](const Assertion& a) { return a.pass; })
                      ? 0
                      : 1;
  } catch (const Error& e) {
    m.error = e.what();
    m.exit_code = e.kind() == ErrorKind::config || e.kind() == ErrorKind::invalid_argument ? 2 : 3;
  } catch (const std::exception& e) {
    m.error = e.what();
    m.exit_code = 3;
  }
  m.files = ctx.files;
  m.assertions = ctx.assertions;
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.files.push_back("manifest.json");
  write_manifest(cfg.output, m);
  return m;
}

SweepSpec SweepSpec::parse(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--sweep", "expected key=start:stop:steps");
  SweepSpec s;
  s.key = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  for (char& ch : rest)
    if (ch == ':') ch = ' ';
  std::istringstream in(rest);
  if (!(in >> s.start >> s.stop >> s.steps) || !in.eof() || s.steps < 1)
    throw ConfigError("--sweep", "expected key=start:stop:steps with steps >= 1");
  return s;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v;
  for (int i = 0; i < steps; ++i)
    v.push_back(steps == 1 ? start : start + (stop - start) * i / (steps - 1));
  return v;
}

std::vector<RunManifest> run_sweep(const ExperimentConfig& base, const SweepSpec& sweep, unsigned threads) {
  const std::vector<double> values = sweep.values();
  std::vector<ExperimentConfig> cfgs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig c = config_from_json(with_override(base.json_text, sweep.key, values[i]));
    char name[32];
    std::snprintf(name, sizeof name, "sweep_%03zu", i);
    c.output = (std::filesystem::path(base.output) / name).string();
    json j = json::parse(c.json_text);
    j["output"] = c.output;
    c.json_text = j.dump(2);
    cfgs.push_back(std::move(c));
  }
  std::vector<RunManifest> out(cfgs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, cfgs.size()); ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < cfgs.size();) out[i] = run(cfgs[i]);
    });
  for (auto& t : pool) t.join();

  std::filesystem::create_directories(base.output);
  json runs = json::array();
  for (std::size_t i = 0; i < cfgs.size(); ++i)
    runs.push_back({{"value", values[i]}, {"output", cfgs[i].output}, {"exit_code", out[i].exit_code},
                    {"error", out[i].error}});
  std::ofstream f(std::filesystem::path(base.output) / "sweep.json");
  f << json{{"key", sweep.key}, {"runs", runs}}.dump(2) << '\n';
  return out;
}

}  // namespace nlslab
