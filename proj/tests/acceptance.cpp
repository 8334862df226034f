// Acceptance runner. `nlslab_acceptance <id>...` runs the listed criteria
// (1..11, or "all") and prints one PASS/FAIL line per criterion, preceded by
// the measured quantities.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bounds_oracle.hpp"
#include "nlslab/bounds.hpp"
#include "nlslab/determining_form.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/w_map.hpp"
#include "support.hpp"

using namespace nlslab;
using testing_support::gentle_forcing;
using testing_support::sup_distance;
using testing_support::three_mode_forcing;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  // Records value <= limit (or value < limit when strict).
  void le(const std::string& what, double value, double limit, bool strict = false) {
    const bool ok = std::isfinite(value) && (strict ? value < limit : value <= limit);
    note(what, ok, value, strict ? " < " : " <= ", limit);
  }
  void ge(const std::string& what, double value, double limit) {
    note(what, std::isfinite(value) && value >= limit, value, " >= ", limit);
  }
  void within(const std::string& what, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-4s %s = %.6g in [%g, %g]", ok ? "ok" : "BAD", what.c_str(), value, lo, hi);
    lines.emplace_back(buf);
    pass = pass && ok;
  }
  void info(const std::string& what) { lines.push_back("  info " + what); }
  void flag(const std::string& what, bool ok) {
    lines.push_back(std::string("  ") + (ok ? "ok   " : "BAD  ") + what);
    pass = pass && ok;
  }

private:
  void note(const std::string& what, bool ok, double value, const char* op, double limit) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-4s %s = %.6g%s%g", ok ? "ok" : "BAD", what.c_str(), value, op, limit);
    lines.emplace_back(buf);
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double calibrated_c(double L = 2 * pi) { return calibrate_agmon_constant(SpectralGrid::make(L, 32), 1000, 0); }

// 1. Plane wave a e^{i(kx - wt)}, w = k^2 - a^2, of the unforced undamped equation.
void plane_wave(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = SpectralGrid::make(2 * pi, 16);
  const NlsParams p{0.0, Field(g), 0, 0, true};
  const int k = 1;
  const double a = 0.5, T = 1;
  const Field exact = Field::mode(g, k, a * std::exp(cplx(0, -(k * k - a * a) * T)));
  auto err = [&](double dt) {
    const Field u = advance(Field::mode(g, k, a), p, nullptr, 0, T, {dt, Scheme::strang_splitstep, 1});
    return norm(u - exact, Norm::L2);
  };
  const double e1 = err(1e-3), e2 = err(5e-4);
  o.le("L2 error at T=1, dt=1e-3", e1, 1e-8, true);
  o.within("error ratio dt=1e-3 / dt=5e-4", e1 / e2, 3.6, 4.4);
  o.le("runtime [s]", seconds_since(t0), 10, true);
}

// 2. Integrable limit: mass and Hamiltonian conservation over T = 10.
void conservation(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 16);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  Field u0(g);
  for (int k = -2; k <= 2; ++k) u0[k] = 0.3 * cplx(N(rng), N(rng));
  const NlsParams p{0.0, Field(g), 0, 0, true};
  const Field u = advance(u0, p, nullptr, 0, 10, {5e-4, Scheme::strang_splitstep, 1});
  const double m0 = std::pow(norm(u0, Norm::L2), 2), m1 = std::pow(norm(u, Norm::L2), 2);
  const double h0 = hamiltonian(u0), h1 = hamiltonian(u);
  o.le("relative mass drift", std::abs(m1 - m0) / m0, 1e-10, true);
  o.le("relative Hamiltonian drift", std::abs(h1 - h0) / std::abs(h0), 1e-6, true);
}

// Reference solution shared by the balance-law criteria: random data pushed
// onto the attractor with a fixed step, so every dt starts from the same state.
Field reference_start(const NlsParams& p0, double spinup) {
  return advance(random_initial_condition(p0.grid(), 1), p0, nullptr, 0, spinup, {2.5e-3, Scheme::rk4_galerkin, 1});
}

// 3. Mass balance along nudged runs.
void mass_balance(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  const NlsParams p0{0.5, gentle_forcing(g), 0, 8, false};
  NlsParams p = p0;
  p.mu = 10;
  const Field u0 = reference_start(p0, 2);
  auto residual = [&](double dt) {
    const SchemeConfig c{dt, Scheme::strang_splitstep, 1};
    const Trajectory u = integrate(u0, p0, nullptr, 0, 4, c);
    const Trajectory v = project_low_traj(u, p.m);
    const Trajectory w = integrate(Field(g), p, &v, 0, 4, c);
    return max_residual(mass_series(restrict_window(w, 1, 4), v, p));
  };
  const double r1 = residual(1e-3), r2 = residual(5e-4);
  o.le("mass-balance residual per unit time, dt=1e-3", r1, 1e-6, true);
  o.within("residual ratio dt=1e-3 / dt=5e-4", r1 / r2, 3.5, 4.5);
}

// 4. Synchronization of w towards u, with an uncoupled control.
void synchronization(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = SpectralGrid::make(2 * pi, 32);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 8, false};
  const SchemeConfig c{2.5e-3, Scheme::rk4_galerkin, 2};
  const AttractorSample a = attractor_sample(p0, 60, 100, 1, c);
  NlsParams p = p0;
  p.mu = 10;
  const SyncReport r = sync_experiment(a.window, p, c, 1e-6, 100);
  o.le("first s with sup||w - u|| < 1e-6", r.time_below < 0 ? INFINITY : r.time_below, 100);
  o.ge("fitted decay rate", r.fitted_rate, 0);
  o.flag("coupled run passes", r.pass);
  NlsParams q = p0;
  q.mu = 0;
  const SyncReport ctl = sync_experiment(a.window, q, c, 1e-6, 100);
  char buf[160];
  std::snprintf(buf, sizeof buf, "mu = 0 control does not pass (final delta %.3g, rate %.3g)", ctl.delta.back(),
                ctl.fitted_rate);
  o.flag(buf, !ctl.pass);
  o.le("runtime [s]", seconds_since(t0), 60, true);
}

WmapConfig wmap_config() {
  WmapConfig cfg;
  cfg.spinup_k = 40;
  cfg.scheme = {2.5e-3, Scheme::rk4_galerkin, 1};
  return cfg;
}

// 5. W fixed points: steady state and an attractor window.
void w_fixed_point(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 8, false};
  NlsParams p = p0;
  p.mu = 10;
  const WmapConfig cfg = wmap_config();

  const SteadyState s = steady_state_by_continuation(p0);
  const Trajectory vs = Trajectory::constant(project_low(s.u, p.m), 0, 0.005, 201, p.m);
  const WmapResult ws = evaluate_W(vs, p, cfg);
  o.le("|u* - W(P_m u*)|_Y", sup_distance(ws.w, Trajectory::constant(s.u, 0, 0.005, 201), Norm::H2), 1e-8, true);

  const AttractorSample a = attractor_sample(p0, 60, 40, 1, {2.5e-3, Scheme::rk4_galerkin, 2});
  const WmapResult w = evaluate_W(project_low_traj(a.window, p.m), p, cfg);
  const double d = sup_distance(restrict_window(w.w, 20, 40), restrict_window(a.window, 20, 40), Norm::H2);
  o.le("|u - W(P_m u)|_Y on [20, 40] of a [0, 40] window", d, 1e-6, true);
}

// 6. Two W evaluations from different start states.
void forgetting(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 8, false};
  NlsParams p = p0;
  p.mu = 10;
  const AttractorSample a = attractor_sample(p0, 60, 10, 1, {2.5e-3, Scheme::rk4_galerkin, 2});
  const Trajectory v = project_low_traj(a.window, p.m);
  const WmapConfig cfg = wmap_config();
  const WmapResult w0 = evaluate_W(v, p, cfg);
  testing_support::FieldGen gen(17, 1.0, 1.0);
  const Field start = 5.0 * gen(g);
  const WmapResult w1 = evaluate_W(v, p, cfg, &start);
  o.le("sup-L2 distance of the two evaluations", sup_distance(w0.w, w1.w, Norm::L2), 1e-8, true);
}

// 7. Determining form from a perturbed steady state.
void determining_form(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 16);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 6, false};
  NlsParams p = p0;
  p.mu = 10;
  const SteadyState s = steady_state_by_continuation(p0);
  const Field target = project_low(s.u, p.m);

  FormConfig fc;
  fc.wmap.spinup_k = 30;
  fc.wmap.scheme = {5e-3, Scheme::rk4_galerkin, 1};
  fc.dt_form = 1e12;
  fc.tol = 1e-6;

  const FormTangent F0 = vector_field_F({Trajectory::constant(target, 0, 0.05, 21, p.m), s.u, 0, 0, 0}, p, fc.wmap);
  bool zero = true;
  for (const auto& f : F0.F.fields()) zero = zero && f.is_zero();
  o.flag("F(P_m u*) = 0 exactly", zero);

  BoundsInput in;
  in.gamma = p.gamma, in.norm_f = norm(p.f, Norm::L2), in.mu = p.mu, in.v_X = 0, in.c = calibrated_c(), in.m = p.m;
  const double R = compute_report(in).R;
  for (double eps : {0.05, 0.5}) {
    const Field v0 = target + Field::mode(g, 2, eps);
    const FormEvolution e = evolve_form({Trajectory::constant(v0, 0, 0.05, 21, p.m), s.u, 0, 0, R}, 400, p, fc);
    const std::string tag = "eps " + std::to_string(eps).substr(0, 4) + ": ";
    o.le(tag + "|v0 - P_m u*|_X", e.records.front().dist_X, 3 * R, true);
    o.flag(tag + "distance nonincreasing", e.monotone);
    o.flag(tag + "stays in the 3R ball", !e.ball_exit);
    o.le(tag + "collinearity defect", e.max_collinearity_defect, 1e-10, true);
    o.le(tag + "final residual", e.records.back().residual, 1e-6, true);
  }
}

// 8. Bounds transcription and asymptotic orders.
void bounds(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  BoundsInput in;
  in.gamma = 1, in.L = 2 * pi, in.norm_f = 1, in.mu = 10, in.v_X = 1, in.c = 2, in.xi = 1.0 / 7.0, in.m = 8;
  const BoundsReport r = compute_report(in);
  const auto ref = oracle::bounds(in.gamma, in.L, in.norm_f, in.mu, in.v_X, in.c, in.xi, in.m);
  int mismatched = 0;
  for (const auto& [name, value] : r.entries())
    if (!ref.count(name) || ref.at(name) != value) ++mismatched;
  o.le("entries differing bitwise from the dual transcription", mismatched, 0);

  struct Order {
    const char* label;
    const char* constant;
    OrderParam param;
    double expected;
  };
  const Order orders[] = {
      {"R0 ~ mu^0", "R0", OrderParam::mu, 0},
      {"R1 ~ mu^1/2", "R1", OrderParam::mu, 0.5},
      {"R2 ~ mu^2", "R2", OrderParam::mu, 2},
      {"R' ~ mu^2", "Rp", OrderParam::mu, 2},
      {"R0 ~ gamma^-1", "R0", OrderParam::gamma, -1},
      {"R1 ~ gamma^-7/2", "R1", OrderParam::gamma, -3.5},
      {"R2 ~ gamma^-17", "R2", OrderParam::gamma, -17},
      {"R' ~ gamma^-17", "Rp", OrderParam::gamma, -17},
      {"m ~ |f|^10", "modes_thm31", OrderParam::norm_f, 10},
      {"m ~ gamma^-12", "modes_thm31", OrderParam::gamma, -12},
  };
  for (const auto& e : orders) {
    const double lo = e.param == OrderParam::mu ? 1e2 : e.param == OrderParam::gamma ? 1e-5 : 1e1;
    const OrderFit f = asymptotic_order_fit(in, e.constant, e.param, lo, lo * 1e4, 41);
    o.within(std::string("slope ") + e.label, f.slope, e.expected - 0.2, e.expected + 0.2);
  }
  o.le("runtime [s]", seconds_since(t0), 5, true);
}

// 9. Reverse and generalized Poincare on pairs of attractor windows.
void poincare(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 16);
  const NlsParams p0{0.1, three_mode_forcing(g), 0, 0, false};
  const SchemeConfig c{2e-3, Scheme::strang_splitstep, 5};
  BoundsInput in;
  in.gamma = p0.gamma, in.norm_f = norm(p0.f, Norm::L2), in.mu = 0, in.v_X = 0, in.c = calibrated_c();
  double worst_ratio = 0, worst_excess = -INFINITY, K11 = 0;
  for (int i = 0; i < 10; ++i) {
    const Trajectory u = attractor_sample(p0, 100, 10, 2 * i + 1, c).window;
    const Trajectory ut = attractor_sample(p0, 100, 10, 2 * i + 2, c).window;
    const ReversePoincareReport r = reverse_poincare_check(u, ut, in);
    worst_ratio = std::max(worst_ratio, r.ratio);
    worst_excess = std::max(worst_excess, r.poincare_excess);
    K11 = r.K11;
  }
  o.le("max sup||d_x|| / sup||d|| over 10 pairs", worst_ratio, K11);
  o.le("max ||Q_m d|| - L ||d_x|| / (2 pi (m+1))", worst_excess, 1e-10);
}

// Smooth low-mode perturbation eps (A cos s + B sin s) with exact derivative.
Trajectory perturbed(const Trajectory& v, const Field& A, const Field& B, double eps) {
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = v.time(i);
    f.push_back(v.field(i) + eps * (std::cos(s) * A + std::sin(s) * B));
    d.push_back(v.deriv(i) + eps * (std::cos(s) * B - std::sin(s) * A));
  }
  return Trajectory(v.grid(), v.s0(), v.ds(), std::move(f), std::move(d), v.mode_cutoff());
}

// 10. Empirical Lipschitz ratio of P_m W against L_W.
void lipschitz(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 16);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 6, false};
  NlsParams p = p0;
  p.mu = 10;
  WmapConfig cfg;
  cfg.spinup_k = 30;
  cfg.scheme = {5e-3, Scheme::rk4_galerkin, 1};
  BoundsInput in;
  in.L = 2 * pi, in.c = calibrated_c();
  testing_support::FieldGen gen(23, 1.0, 1.0);
  double worst_q = 0, worst_ratio = 0, worst_LW = 0, worst_change = 0;
  for (int i = 0; i < 20; ++i) {
    const Trajectory u = attractor_sample(p0, 30, 2, 100 + i, cfg.scheme).window;
    const Trajectory v = project_low_traj(u, p.m);
    const Field A = gen(g, p.m), B = gen(g, p.m);
    const double eps = 0.05 * gen.real(0.5, 1.5);
    const LipschitzReport r1 = lipschitz_probe(v, perturbed(v, A, B, eps), p, cfg, in);
    const LipschitzReport r2 = lipschitz_probe(v, perturbed(v, A, B, eps / 2), p, cfg, in);
    if (r1.ratio / r1.LW > worst_q) worst_q = r1.ratio / r1.LW, worst_ratio = r1.ratio, worst_LW = r1.LW;
    worst_change = std::max(worst_change, std::abs(r2.ratio / r1.ratio - 1));
  }
  o.le("empirical ratio of the worst pair vs its L_W", worst_ratio, worst_LW);
  o.le("max relative change of the ratio under eps halving", worst_change, 0.2);
}

// 11. phi and Phi balance laws along nudged runs. The gated run is the
// mass-balance reference; a chaotic gamma = 0.1 run is reported alongside.
void functional_balance(Outcome& o) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  auto residuals = [&](double gamma, double spinup, double T, double dt) {
    const NlsParams p0{gamma, gentle_forcing(g), 0, 8, false};
    NlsParams p = p0;
    p.mu = 10;
    const Field u0 = reference_start(p0, spinup);
    const SchemeConfig c{dt, Scheme::strang_splitstep, 1};
    const Trajectory u = integrate(u0, p0, nullptr, 0, T, c);
    const Trajectory v = project_low_traj(u, p.m);
    const Trajectory w = integrate(Field(g), p, &v, 0, T, c);
    const Trajectory ww = restrict_window(w, 1, T);
    return std::pair{max_residual(phi_series(ww, restrict_window(v, 1, T), p)),
                     max_residual(Phi_series(ww, restrict_window(u, 1, T), p))};
  };
  const auto [phi1, Phi1] = residuals(0.5, 2, 4, 1e-3);
  const auto [phi2, Phi2] = residuals(0.5, 2, 4, 5e-4);
  o.le("phi balance residual, dt=1e-3", phi1, 1e-4, true);
  o.within("phi residual ratio under dt halving", phi1 / phi2, 3.5, 4.5);
  o.le("Phi balance residual, dt=1e-3", Phi1, 1e-4, true);
  o.within("Phi residual ratio under dt halving", Phi1 / Phi2, 3.5, 4.5);

  const auto [cphi1, cPhi1] = residuals(0.1, 20, 3, 1e-3);
  const auto [cphi2, cPhi2] = residuals(0.1, 20, 3, 5e-4);
  o.info("gamma=0.1 run: phi residual " + fmt(cphi1) + " (ratio " + fmt(cphi1 / cphi2) + "), Phi residual " +
         fmt(cPhi1) + " (ratio " + fmt(cPhi1 / cPhi2) + ")");
}

const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
    {1, {"integrator exactness (plane wave)", plane_wave}},
    {2, {"conservation limit", conservation}},
    {3, {"mass-balance identity", mass_balance}},
    {4, {"synchronization", synchronization}},
    {5, {"W fixed point", w_fixed_point}},
    {6, {"uniqueness / forgetting", forgetting}},
    {7, {"determining form", determining_form}},
    {8, {"bounds transcription and orders", bounds}},
    {9, {"reverse and generalized Poincare", poincare}},
    {10, {"Lipschitz probe", lipschitz}},
    {11, {"functional balance laws", functional_balance}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "all") {
      for (const auto& [id, _] : criteria) ids.push_back(id);
    } else {
      const int id = std::atoi(a.c_str());
      if (!criteria.count(id)) {
        std::fprintf(stderr, "unknown criterion %s\n", a.c_str());
        return 2;
      }
      ids.push_back(id);
    }
  }
  if (ids.empty())
    for (const auto& [id, _] : criteria) ids.push_back(id);

  int failed = 0;
  for (int id : ids) {
    const auto& [name, fn] = criteria.at(id);
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.flag(std::string("exception: ") + e.what(), false);
    }
    for (const auto& l : o.lines) std::printf("%s\n", l.c_str());
    std::printf("criterion %2d %-36s %s (%.1f s)\n", id, name, o.pass ? "PASS" : "FAIL", seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
