#include "nlslab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "format.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/spectral_field.hpp"

namespace nlslab {
namespace {

double checked(double x, const char* name) {
  if (!std::isfinite(x)) throw Overflow(name);
  return x;
}

// L2 radius R0 of the final chain.
double final_R0(double g, double F, double mu, double V) {
  return F / std::sqrt(g * (g + mu)) + std::sqrt(mu / (g + mu)) * V + std::sqrt(mu / (g + mu));
}

struct Cs {
  double K1, K2, K5, K6, K7, Rp, Rinf;
};

Cs cs_of(const BoundsInput& in) {
  return {in.c_for("K1"), in.c_for("K2"), in.c_for("K5"), in.c_for("K6"), in.c_for("K7"), in.c_for("Rp"),
          in.c_for("Rinf")};
}

Cs uniform(double c) { return {c, c, c, c, c, c, c}; }

H1Chain h1(double g, double F, double mu, double V, const Cs& c, double xi, double R) {
  H1Chain h;
  h.K1 = checked(6 * g * F * R + 6 * mu * g * V * R + mu * mu * c.K1 * c.K1 * std::pow(R, 6) / g + 2 * mu * F * R +
                     2 * mu * mu * V * R + 2 * mu * V * R,
                 "K1 (H1 chain)");
  h.K2 = checked(c.K2 * c.K2 * std::pow(R, 6) / (16 * xi) + 0.5 * c.K2 * std::pow(R, 4) + 2 * F * R + 2 * mu * V * R +
                     (1 - xi) * R * R,
                 "K2 (H1 chain)");
  h.K3 = checked(3 * g * h.K2 / (1 - xi) + h.K1, "K3 (H1 chain)");
  h.K4 = checked(h.K3 * (1 - xi) / (g * (1 - 4 * xi)), "K4 (H1 chain)");
  h.R1 = checked(std::sqrt((h.K4 + h.K2) / (1 - xi)), "R1 (H1 chain)");
  return h;
}

H2Chain h2(double g, double F, double mu, double V, const Cs& c, double R0, double R1) {
  H2Chain h;
  const double a = std::sqrt(R0) * R1 * R1;
  const double b = R0 * R1 * (R0 * R0 * R1 + (g + mu) * R0 + mu * V + F);
  h.K5 = checked(c.K5 * std::pow(a, 4) / std::pow(g, 3) + c.K5 * b * b / g, "K5");
  const double q = R0 * R0 * R1;
  const double c6 = c.K6;
  h.K6 = checked(2 * h.K5 + c6 * mu * mu * V * V / g + c6 * g * mu * mu * V * V + c6 * g * F * F + c6 * mu * q * q +
                     c6 * mu * F * F + c6 * std::pow(mu, 3) * V * V,
                 "K6");
  h.K7 = checked(c.K7 * (R0 * std::pow(R1, 3) + F * F + mu * mu * V * V), "K7");
  h.R2 = checked(std::sqrt(4 * h.K6 / g + 4 * h.K7) + R0, "R2");
  return h;
}

struct FinalChain {
  double R0, K1, K2, R1;
  H2Chain h2;
  double Rp, Rinf;
};

FinalChain final_chain(double g, double F, double mu, double V, const Cs& c) {
  FinalChain f{};
  f.R0 = checked(final_R0(g, F, mu, V), "R0");
  const double R0 = f.R0;
  f.K1 = checked(6 * g * F * R0 + 6 * mu * g * V * R0 + mu * (c.K1 * c.K1 * std::pow(R0, 6) + R0 * R0) + 2 * mu +
                     2 * mu * F * R0 + 2 * mu * V * R0,
                 "K1");
  f.K2 = checked(3 * c.K2 * c.K2 * std::pow(R0, 6) / 16 + 0.5 * c.K2 * std::pow(R0, 4) + 2 * F * R0 + 2 * mu * V * R0 +
                     2.0 / 3.0 * R0 * R0,
                 "K2");
  f.R1 = checked(std::sqrt(((1.5 * mu + 6 * g) * f.K2 + f.K1) / (g + mu)), "R1");
  f.h2 = h2(g, F, mu, V, c, R0, f.R1);
  f.Rp = checked(f.h2.R2 + c.Rp * R0 * R0 * f.R1 + (g + mu) * R0 + F + mu * V, "Rp");
  f.Rinf = checked(c.Rinf * R0 * f.R1, "Rinf");
  return f;
}

}  // namespace

const std::vector<std::string>& c_override_keys() {
  static const std::vector<std::string> keys = {"K1",  "K2", "K5",          "K6",          "K7",         "Rp",
                                                "Rinf", "K11", "LW", "mcondition2", "mucondition2", "mcondition3"};
  return keys;
}

double BoundsInput::c_for(const std::string& key) const {
  const auto it = c_override.find(key);
  return it == c_override.end() ? c : it->second;
}

void BoundsInput::validate() const {
  auto bad = [](double x) { return !std::isfinite(x); };
  if (bad(gamma) || !(gamma > 0)) throw InvalidArgument("gamma must be positive");
  if (bad(L) || !(L > 0)) throw InvalidArgument("L must be positive");
  if (bad(norm_f) || norm_f < 0) throw InvalidArgument("norm_f must be >= 0");
  if (bad(mu) || mu < 0) throw InvalidArgument("mu must be >= 0");
  if (bad(v_X) || v_X < 0) throw InvalidArgument("v_X must be >= 0");
  if (bad(c) || !(c > 0)) throw InvalidArgument("c must be positive");
  // The H1 Gronwall step needs 1 - 4 xi > 0.
  if (bad(xi) || !(xi > 0) || !(xi < 0.25)) throw InvalidArgument("xi must lie in (0, 1/4)");
  if (m < 0) throw InvalidArgument("m must be >= 0");
  const auto& keys = c_override_keys();
  for (const auto& [k, v] : c_override) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw InvalidArgument("unknown c override: " + k);
    if (bad(v) || !(v > 0)) throw InvalidArgument("c override " + k + " must be positive");
  }
}

H1Chain h1_chain(double g, double F, double mu, double V, double c, double xi, double R) {
  return h1(g, F, mu, V, uniform(c), xi, R);
}

H2Chain h2_chain(double g, double F, double mu, double V, double c, double R0, double R1) {
  return h2(g, F, mu, V, uniform(c), R0, R1);
}

BoundsReport compute_report(const BoundsInput& in) {
  in.validate();
  const double g = in.gamma, F = in.norm_f, mu = in.mu, V = in.v_X, xi = in.xi;
  const Cs c = cs_of(in);
  BoundsReport r;
  r.input = in;

  r.Rt0 = checked(F / g + std::sqrt(mu / g) * V, "Rt0");
  r.tt = h1(g, F, mu, V, c, xi, r.Rt0);

  const FinalChain fin = final_chain(g, F, mu, V, c);
  r.R0 = fin.R0;
  r.t = h1(g, F, mu, V, c, xi, r.R0);
  r.t2 = h2(g, F, mu, V, c, r.R0, r.t.R1);
  r.K1 = fin.K1;
  r.K2 = fin.K2;
  r.R1 = fin.R1;
  r.f2 = fin.h2;
  r.Rp = fin.Rp;
  r.Rinf = fin.Rinf;

  const FinalChain zero = final_chain(g, F, 0.0, 0.0, c);
  r.R0_0 = zero.R0;
  r.R1_0 = zero.R1;
  r.R2_0 = zero.h2.R2;
  r.Rp_0 = zero.Rp;
  r.Rinf_0 = zero.Rinf;
  r.R = checked(r.R0_0 + r.Rp_0, "R");

  const double Ri = r.Rinf, Ri0 = r.Rinf_0, Rp = r.Rp, Rp0 = r.Rp_0;
  const double g13 = std::pow(g, -1.0 / 3.0);
  const double mix = std::sqrt(Ri) * std::sqrt(Ri0);
  r.K8 = checked(mu * (Ri + Ri0) + mu * mix + std::sqrt(Ri0) * Rp + g13 * std::pow(Ri0, 2.0 / 3.0) * std::pow(Rp, 4.0 / 3.0) +
                     std::sqrt(Ri) * Rp0 + g13 * std::pow(Ri, 2.0 / 3.0) * std::pow(Rp0, 4.0 / 3.0),
                 "K8");
  r.K9 = checked(mix * (r.K8 + g * (Ri + Ri0 + mix)), "K9");
  r.K10 = checked(Ri * ((mu + g) * Ri + g13 * std::pow(Ri, 2.0 / 3.0) * std::pow(Rp, 4.0 / 3.0)), "K10");
  const double c11 = in.c_for("K11"), cW = in.c_for("LW");
  r.K11 = checked(std::sqrt((c11 * g * Ri0 + c11 * g13 * std::pow(Ri0, 2.0 / 3.0) * std::pow(Rp0, 4.0 / 3.0)) / g), "K11");
  const double m = in.m;
  const double kappa = 2 * pi / in.L;
  r.LW = checked((m * m + cW * Ri + g + mu + 1) * (cW * Ri * (mu + 3 * g * mu) / (kappa * kappa * (m + 1) * (m + 1) * g)) + mu,
                 "LW");

  r.conditions = check_conditions(r, in.m, in.mu);
  return r;
}

double min_m_for(double X, bool strict) {
  const double m = strict ? std::floor(X) : std::ceil(X) - 1;
  return std::max(0.0, m);
}

std::vector<Condition> check_conditions(const BoundsReport& r, double m, double mu) {
  const auto& in = r.input;
  const double L = in.L, g = in.gamma;
  const double mp1 = m + 1.0;
  std::vector<Condition> out;
  // Conditions of the form N / (m+1)^2 < 1 or <= 1.
  auto add_m = [&](const char* name, double N, bool strict) {
    Condition k{name, N / (mp1 * mp1), 1.0, strict, false, min_m_for(std::sqrt(N), strict)};
    k.holds = strict ? k.lhs < 1.0 : k.lhs <= 1.0;
    out.push_back(k);
  };
  add_m("E1", r.tt.R1 * r.tt.R1 * L * L / (4 * pi * pi), true);
  add_m("E2", r.t2.R2 * r.t2.R2 * L * L / (4 * pi * pi), false);
  {
    Condition k{"mucondition", std::sqrt(r.Rinf) * std::sqrt(r.Rinf_0), mu, true, false, std::nullopt};
    k.holds = k.lhs < k.rhs;
    out.push_back(k);
  }
  add_m("mcondition2", in.c_for("mcondition2") * L * L * r.K9 / (g * g), false);
  {
    Condition k{"mucondition2", in.c_for("mucondition2") * r.R0 * r.R1, mu, true, false, std::nullopt};
    k.holds = k.lhs < k.rhs;
    out.push_back(k);
  }
  add_m("mcondition3", in.c_for("mcondition3") * L * L * r.K10 / (g * g), false);
  {
    const double X = L / (2 * pi) * r.K11;
    Condition k{"determining_modes", m, X - 1, false, false, std::max(0.0, std::ceil(X - 1))};
    k.holds = k.lhs >= k.rhs;
    out.push_back(k);
  }
  return out;
}

std::vector<std::pair<std::string, double>> BoundsReport::entries() const {
  const auto& in = input;
  return {
      {"Rt0", Rt0},
      {"Ktt1", tt.K1}, {"Ktt2", tt.K2}, {"Ktt3", tt.K3}, {"Ktt4", tt.K4}, {"Rtt1", tt.R1},
      {"Kt1", t.K1}, {"Kt2", t.K2}, {"Kt3", t.K3}, {"Kt4", t.K4}, {"Rt1", t.R1},
      {"Kt5", t2.K5}, {"Kt6", t2.K6}, {"Kt7", t2.K7}, {"Rt2", t2.R2},
      {"R0", R0}, {"K1", K1}, {"K2", K2}, {"R1", R1},
      {"K5", f2.K5}, {"K6", f2.K6}, {"K7", f2.K7}, {"R2", f2.R2},
      {"Rp", Rp}, {"Rinf", Rinf},
      {"R0_0", R0_0}, {"R1_0", R1_0}, {"R2_0", R2_0}, {"Rp_0", Rp_0}, {"Rinf_0", Rinf_0}, {"R", R},
      {"K8", K8}, {"K9", K9}, {"K10", K10}, {"K11", K11}, {"LW", LW},
      {"mucondition_lhs", std::sqrt(Rinf) * std::sqrt(Rinf_0)},
      {"mcondition2_lhs", in.c_for("mcondition2") * in.L * in.L * K9 / (2 * in.gamma * in.gamma)},
      {"mucondition2_lhs", in.c_for("mucondition2") * R0 * R1},
      {"mcondition3_lhs", in.c_for("mcondition3") * in.L * in.L * K10 / (2 * in.gamma * in.gamma)},
      {"modes_thm31", in.L / (2 * pi) * K11 - 1},
  };
}

double BoundsReport::get(const std::string& name) const {
  for (const auto& [k, v] : entries())
    if (k == name) return v;
  throw InvalidArgument("unknown bounds constant " + name);
}

std::string to_string(OrderParam p) {
  switch (p) {
    case OrderParam::mu: return "mu";
    case OrderParam::gamma: return "gamma";
    case OrderParam::norm_f: return "norm_f";
  }
  return "";
}

OrderParam order_param_from_string(const std::string& s) {
  if (s == "mu") return OrderParam::mu;
  if (s == "gamma") return OrderParam::gamma;
  if (s == "norm_f") return OrderParam::norm_f;
  throw InvalidArgument("unknown order parameter " + s);
}

OrderFit asymptotic_order_fit(const BoundsInput& base, const std::string& constant, OrderParam param, double lo,
                              double hi, int samples) {
  if (!(lo > 0) || !(hi > lo)) throw InvalidArgument("order fit range must be positive and increasing");
  if (std::log10(hi / lo) < 4 - 1e-9) throw InvalidArgument("order fit range must span at least four decades");
  if (samples < 8) throw InvalidArgument("order fit needs at least 8 samples");
  OrderFit fit;
  fit.constant = constant;
  fit.param = param;
  for (int i = 0; i < samples; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    BoundsInput in = base;
    (param == OrderParam::mu ? in.mu : param == OrderParam::gamma ? in.gamma : in.norm_f) = x;
    const double y = compute_report(in).get(constant);
    if (!std::isfinite(y) || !(y > 0)) throw Overflow(constant + " along the order-fit range");
    fit.x.push_back(x);
    fit.y.push_back(y);
  }
  const bool low_end = param == OrderParam::gamma;
  const double edge = low_end ? std::log(lo) + std::log(10.0) : std::log(hi) - std::log(10.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < fit.x.size(); ++i) {
    const double lx = std::log(fit.x[i]);
    if (low_end ? lx > edge + 1e-12 : lx < edge - 1e-12) continue;
    const double ly = std::log(fit.y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) throw InvalidArgument("too few samples in the asymptotic decade");
  fit.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return fit;
}

std::string format_report_table(const BoundsReport& r) {
  std::ostringstream os;
  const auto& in = r.input;
  os << "inputs: gamma=" << detail::fmt17(in.gamma) << " L=" << detail::fmt17(in.L)
     << " norm_f=" << detail::fmt17(in.norm_f) << " mu=" << detail::fmt17(in.mu) << " v_X=" << detail::fmt17(in.v_X)
     << " c=" << detail::fmt17(in.c) << " (" << in.c_source << ") xi=" << detail::fmt17(in.xi) << " m=" << in.m
     << "\n";
  for (const auto& [k, v] : in.c_override) os << "  c[" << k << "]=" << detail::fmt17(v) << "\n";
  for (const auto& [k, v] : r.entries()) {
    std::string name = k;
    name.resize(18, ' ');
    os << "  " << name << detail::fmt17(v) << "\n";
  }
  os << "conditions at m=" << in.m << ":\n";
  for (const auto& c : r.conditions) {
    std::string name = c.name;
    name.resize(18, ' ');
    os << "  " << name << (c.holds ? "holds " : "fails ") << "lhs=" << detail::fmt17(c.lhs)
       << " rhs=" << detail::fmt17(c.rhs);
    if (c.min_m) os << " min_m=" << detail::fmt17(*c.min_m);
    os << "\n";
  }
  return os.str();
}

std::string report_to_json(const BoundsReport& r) {
  using nlohmann::json;
  const auto& in = r.input;
  json j;
  j["input"] = {{"gamma", in.gamma}, {"L", in.L},   {"norm_f", in.norm_f}, {"mu", in.mu},
                {"v_X", in.v_X},     {"c", in.c},   {"xi", in.xi},         {"m", in.m},
                {"c_source", in.c_source}};
  j["input"]["c_override"] = json::object();
  for (const auto& [k, v] : in.c_override) j["input"]["c_override"][k] = v;
  json constants = json::object();
  for (const auto& [k, v] : r.entries()) constants[k] = v;
  j["constants"] = constants;
  json conds = json::object();
  for (const auto& c : r.conditions) {
    json e = {{"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"strict", c.strict}};
    e["min_m"] = c.min_m ? json(*c.min_m) : json(nullptr);
    conds[c.name] = e;
  }
  j["conditions"] = conds;
  return j.dump(2);
}

BoundsInput bounds_input_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("$", e.what());
  }
  if (!j.is_object()) throw ConfigError("$", "bounds input must be an object");
  BoundsInput in;
  bool have_c = false;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const std::string path = "$." + k;
    auto num = [&]() {
      if (!it->is_number()) throw ConfigError(path, "expected a number");
      return it->get<double>();
    };
    if (k == "schema") {
      if (!it->is_string() || it->get<std::string>() != "nlslab.bounds_input/1")
        throw ConfigError(path, "expected \"nlslab.bounds_input/1\"");
    } else if (k == "gamma") in.gamma = num();
    else if (k == "L") in.L = num();
    else if (k == "norm_f") in.norm_f = num();
    else if (k == "mu") in.mu = num();
    else if (k == "v_X") in.v_X = num();
    else if (k == "c") in.c = num(), have_c = true;
    else if (k == "xi") in.xi = num();
    else if (k == "c_override") {
      if (!it->is_object()) throw ConfigError(path, "expected an object");
      for (auto o = it->begin(); o != it->end(); ++o) {
        if (!o->is_number()) throw ConfigError(path + "." + o.key(), "expected a number");
        in.c_override[o.key()] = o->get<double>();
      }
    } else if (k == "m") {
      if (!it->is_number_integer()) throw ConfigError(path, "expected an integer");
      in.m = it->get<int>();
    } else throw ConfigError(path, "unknown key");
  }
  if (!have_c) {
    const auto grid = SpectralGrid::make(in.L, 32);
    in.c = calibrate_agmon_constant(grid, 1000, 0);
    in.c_source = "calibrated: max agmon ratio, n=32, 1000 samples, seed 0";
  }
  try {
    in.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("$", e.what());
  }
  return in;
}

}  // namespace nlslab
