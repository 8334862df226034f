#include "experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "format.hpp"
#include "nlslab/bounds.hpp"
#include "nlslab/determining_form.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/w_map.hpp"

namespace nlslab::detail {

using nlohmann::json;

std::string RunContext::file(const std::string& name) {
  files.push_back(name);
  return (std::filesystem::path(dir) / name).string();
}

void RunContext::check(const std::string& name, bool pass, const std::string& detail) {
  assertions.push_back({name, pass, detail});
}

namespace {

std::string le(double value, double limit) { return fmt17(value) + " <= " + fmt17(limit); }

void write_json(RunContext& ctx, const std::string& name, const json& j) {
  std::ofstream out(ctx.file(name));
  out << j.dump(2) << '\n';
}

json params_json(const NlsParams& p) {
  return {{"gamma", p.gamma}, {"mu", p.mu}, {"m", p.m}, {"norm_f", norm(p.f, Norm::L2)}, {"L", p.grid().L},
          {"n", p.grid().n}};
}

double agmon_c(const ExperimentConfig& cfg, std::string& source) {
  if (cfg.agmon_c) {
    source = "user";
    return *cfg.agmon_c;
  }
  source = "calibrated(n=32, samples=1000, seed=0)";
  return calibrate_agmon_constant(SpectralGrid::make(cfg.grid.L, 32), 1000, 0);
}

BoundsInput bounds_input(const ExperimentConfig& cfg, const NlsParams& p, double v_X) {
  BoundsInput in;
  in.gamma = p.gamma;
  in.L = p.grid().L;
  in.norm_f = norm(p.f, Norm::L2);
  in.mu = p.mu;
  in.v_X = v_X;
  in.c = agmon_c(cfg, in.c_source);
  in.c_override = cfg.c_override;
  in.xi = cfg.xi;
  in.m = p.m;
  return in;
}

json theory_json(const BoundsReport& r) { return json::parse(report_to_json(r)); }

NlsParams free_params(const ExperimentConfig& cfg) {
  NlsParams p = cfg.params();
  p.mu = 0;
  return p;
}

double sup_distance(const Trajectory& a, const Trajectory& b, Norm kind) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, norm(a.field(i) - b.field(i), kind));
  return d;
}

void simulate(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = free_params(cfg);
  const Field u0 = random_initial_condition(cfg.grid, cfg.seeds[0]);
  const Field start = cfg.spinup > 0 ? advance(u0, p, nullptr, 0, cfg.spinup, cfg.scheme) : u0;
  const Trajectory u = integrate(start, p, nullptr, 0, cfg.window, cfg.scheme);

  const Field zero(cfg.grid);
  FunctionalColumn mass{"mass", {}}, ham{"hamiltonian", {}}, ph{"phi", {}}, vph{"varphi", {}};
  for (const auto& f : u.fields()) {
    const double a = norm(f, Norm::L2);
    mass.values.push_back(a * a);
    ham.values.push_back(hamiltonian(f));
    ph.values.push_back(phi(f, zero, p));
    vph.values.push_back(varphi(f, zero, p));
  }
  write_trajectory_csv(ctx.file("trajectory.csv"), u, {mass, ham, ph, vph});
  write_trajectory_manifest(ctx.file("trajectory_manifest.json"), u);
  write_field_json(ctx.file("final_state.json"), u.field(u.size() - 1));

  const Stationarity st = stationarity(u);
  const DerivativeConsistency dc = check_derivative_consistency(u);
  write_json(ctx, "simulate.json",
             {{"params", params_json(p)},
              {"stationarity",
               {{"mass_mean", st.mass_mean}, {"mass_trend", st.mass_trend}, {"h1_mean", st.h1_mean},
                {"h1_trend", st.h1_trend}, {"stationary", st.stationary}}},
              {"derivative_defect", dc.defect},
              {"derivative_tolerance", dc.tolerance}});
  ctx.check("finite", std::all_of(u.fields().begin(), u.fields().end(), [](const Field& f) { return f.is_finite(); }),
            "all samples finite");
  ctx.check("derivative_consistency", dc.ok, le(dc.defect, dc.tolerance));
}

void steady(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = free_params(cfg);
  const SteadyState s = steady_state_by_continuation(p);
  write_field_json(ctx.file("steady_state.json"), s.u);
  const double tol = SteadyStateOptions{}.tol_factor * std::max(1.0, norm(p.f, Norm::L2));
  write_json(ctx, "steady.json",
             {{"params", params_json(p)},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"guess", "forcing continuation from the linear response"},
              {"norm_L2", norm(s.u, Norm::L2)},
              {"norm_H2", norm(s.u, Norm::H2)}});
  ctx.check("newton_residual", s.residual <= tol, le(s.residual, tol));
}

void nudge(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = cfg.params();
  const AttractorSample a = attractor_sample(free_params(cfg), cfg.spinup, cfg.window, cfg.seeds[0], cfg.scheme);
  const SyncReport r = sync_experiment(a.window, p, cfg.scheme, cfg.tol.sync_floor, cfg.tol.sync_horizon);
  {
    std::ofstream out(ctx.file("sync.csv"));
    out << "s,delta\r\n";
    for (std::size_t i = 0; i < r.s.size(); ++i) out << fmt17(r.s[i]) << ',' << fmt17(r.delta[i]) << "\r\n";
  }
  const BoundsReport th = compute_report(bounds_input(cfg, p, norm_X(project_low_traj(a.window, p.m))));
  write_json(ctx, "nudge.json",
             {{"params", params_json(p)},
              {"config", json::parse(cfg.json_text.empty() ? "{}" : cfg.json_text)},
              {"series_csv_path", "sync.csv"},
              {"fitted_rate", r.fitted_rate},
              {"fit_window", {r.fit_from, r.fit_to}},
              {"time_below_floor", r.time_below < 0 ? json(nullptr) : json(r.time_below)},
              {"floor", r.floor},
              {"horizon", r.horizon},
              {"theory_constants", theory_json(th)},
              {"pass", r.pass}});
  ctx.check("synchronization", r.pass,
            "rate " + fmt17(r.fitted_rate) + ", below floor at " + fmt17(r.time_below));
}

void wmap(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = cfg.params();
  const NlsParams p0 = free_params(cfg);
  const AttractorSample a = attractor_sample(p0, cfg.spinup, cfg.window, cfg.seeds[0], cfg.scheme);
  const Trajectory v = project_low_traj(a.window, p.m);
  const WmapResult w = evaluate_W(v, p, cfg.wmap);

  // The constant pre-pad is not P_m u, so compare once the start has been forgotten.
  const double half = a.window.time((a.window.size() - 1) / 2);
  const Trajectory wu = restrict_window(w.w, half, a.window.end_time());
  const Trajectory uu = restrict_window(a.window, half, a.window.end_time());
  const double fixed = sup_distance(wu, uu, Norm::H2);

  FunctionalColumn dist{"dist_L2_to_u", {}};
  for (std::size_t i = 0; i < w.w.size(); ++i) dist.values.push_back(norm(w.w.field(i) - a.window.field(i), Norm::L2));
  write_trajectory_csv(ctx.file("wmap.csv"), w.w, {dist});

  const SteadyState s = steady_state_by_continuation(p0);
  const std::size_t count = a.window.size();
  const Trajectory vs = Trajectory::constant(project_low(s.u, p.m), 0, a.window.ds(), std::min<std::size_t>(count, 201), p.m);
  const WmapResult ws = evaluate_W(vs, p, cfg.wmap);
  const Trajectory us = Trajectory::constant(s.u, 0, a.window.ds(), vs.size());
  const double steady_fixed = sup_distance(ws.w, us, Norm::H2);

  json j = {{"params", params_json(p)},
            {"certificate", w.certificate},
            {"spinup_used", w.spinup_used},
            {"restarts", w.restarts},
            {"fixed_point_Y", fixed},
            {"fixed_point_window", {half, a.window.end_time()}},
            {"steady_fixed_point_Y", steady_fixed},
            {"sup_norms",
             {{"L2", sup_norm(w.w, Norm::L2)}, {"H1", sup_norm(w.w, Norm::H1)}, {"H2", sup_norm(w.w, Norm::H2)},
              {"ds", sup_deriv_norm(w.w)}}}};
  ctx.check("steady_fixed_point", steady_fixed < cfg.tol.steady_fixed_point, le(steady_fixed, cfg.tol.steady_fixed_point));
  ctx.check("fixed_point", fixed < cfg.tol.fixed_point, le(fixed, cfg.tol.fixed_point));
  if (cfg.seeds.size() > 1) {
    const Field start = random_initial_condition(cfg.grid, cfg.seeds[1]);
    const WmapResult w2 = evaluate_W(v, p, cfg.wmap, &start);
    const double forget = sup_distance(w.w, w2.w, Norm::L2);
    j["forgetting_L2"] = forget;
    ctx.check("forgetting", forget < cfg.tol.forgetting, le(forget, cfg.tol.forgetting));
  }
  const BoundsReport th = compute_report(bounds_input(cfg, p, norm_X(v)));
  j["theory_constants"] = theory_json(th);
  write_json(ctx, "wmap.json", j);
}

void form(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = cfg.params();
  const SteadyState s = steady_state_by_continuation(free_params(cfg));
  const double ds = cfg.scheme.dt * cfg.scheme.sample_every;
  const auto count = static_cast<std::size_t>(std::llround(cfg.window / ds)) + 1;
  const Field target = project_low(s.u, p.m);

  const FormState at_target{Trajectory::constant(target, 0, ds, count, p.m), s.u, 0, 0, 0};
  const FormTangent F0 = vector_field_F(at_target, p, cfg.wmap);
  const bool zero = std::all_of(F0.F.fields().begin(), F0.F.fields().end(), [](const Field& f) { return f.is_zero(); });

  BoundsInput in = bounds_input(cfg, p, 0);
  const double R = compute_report(in).R;
  const Field v0 = target + Field::mode(cfg.grid, cfg.form_mode, cfg.form_amplitude);
  FormState st{Trajectory::constant(v0, 0, ds, count, p.m), s.u, 0, 0, R};
  FormConfig fc;
  fc.wmap = cfg.wmap;
  fc.dt_form = cfg.form_dt;
  fc.tol = cfg.tol.form_residual;
  const FormEvolution e = evolve_form(st, cfg.form_steps, p, fc);
  write_form_csv(ctx.file("form.csv"), e);

  // Observed counterpart of R: X-distance of P_m u from P_m u* over an attractor window.
  const AttractorSample a = attractor_sample(free_params(cfg), cfg.spinup, cfg.window, cfg.seeds[0], cfg.scheme);
  const Trajectory ustar = Trajectory::constant(s.u, a.window.s0(), a.window.ds(), a.window.size());
  const double observed = projected_X_distance(a.window, ustar, p.m);

  const FormRecord& last = e.records.back();
  write_json(ctx, "form.json",
             {{"params", params_json(p)},
              {"R", R},
              {"observed_attractor_radius_X", observed},
              {"initial_distance_X", e.records.front().dist_X},
              {"final_residual", last.residual},
              {"final_distance_X", last.dist_X},
              {"steps", e.records.size() - 1},
              {"converged", e.converged},
              {"stagnated", e.stagnated},
              {"ball_exit", e.ball_exit},
              {"monotone", e.monotone},
              {"max_collinearity_defect", e.max_collinearity_defect},
              {"F_at_target_zero", zero},
              {"u_star", "forcing continuation from the linear response"}});
  ctx.check("F_at_target_zero", zero, "F(P_m u*) vanishes samplewise");
  ctx.check("start_in_ball", e.records.front().dist_X < 3 * R, le(e.records.front().dist_X, 3 * R));
  ctx.check("converged", e.converged, le(last.residual, cfg.tol.form_residual));
  ctx.check("monotone_distance", e.monotone, "distance to P_m u* never increased");
  ctx.check("ball_invariance", !e.ball_exit, "distance stayed below 3R");
  ctx.check("collinearity", e.max_collinearity_defect <= cfg.tol.collinearity,
            le(e.max_collinearity_defect, cfg.tol.collinearity));
}

void bounds(const ExperimentConfig& cfg, RunContext& ctx) {
  BoundsInput in;
  in.gamma = cfg.gamma;
  in.L = cfg.grid.L;
  in.norm_f = norm(forcing_from_spec(cfg.forcing, cfg.grid, cfg.gamma), Norm::L2);
  in.mu = cfg.mu;
  in.v_X = cfg.v_X;
  in.c = agmon_c(cfg, in.c_source);
  in.c_override = cfg.c_override;
  in.xi = cfg.xi;
  in.m = cfg.m;
  const BoundsReport r = compute_report(in);
  {
    std::ofstream out(ctx.file("bounds.json"));
    out << report_to_json(r) << '\n';
  }
  {
    std::ofstream out(ctx.file("bounds.txt"));
    out << format_report_table(r);
  }
}

void modes(const ExperimentConfig& cfg, RunContext& ctx) {
  const NlsParams p = cfg.params();
  const AttractorSample a = attractor_sample(free_params(cfg), cfg.spinup, cfg.window, cfg.seeds[0], cfg.scheme);
  const BoundsReport r = compute_report(bounds_input(cfg, p, norm_X(project_low_traj(a.window, p.m))));
  json conds = json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds},
                     {"min_m", c.min_m ? json(*c.min_m) : json(nullptr)}});

  json empirical = json::array();
  std::ofstream out(ctx.file("modes.csv"));
  out << "m,fitted_rate,final_delta,pass\r\n";
  json first_pass = nullptr;
  for (int m : cfg.modes_m_values) {
    NlsParams q = p;
    q.m = m;
    const SyncReport s = sync_experiment(a.window, q, cfg.scheme, cfg.tol.sync_floor, cfg.tol.sync_horizon);
    out << m << ',' << fmt17(s.fitted_rate) << ',' << fmt17(s.delta.back()) << ',' << (s.pass ? 1 : 0) << "\r\n";
    empirical.push_back({{"m", m}, {"fitted_rate", s.fitted_rate}, {"final_delta", s.delta.back()}, {"pass", s.pass}});
    if (s.pass && first_pass.is_null()) first_pass = m;
  }
  write_json(ctx, "modes.json",
             {{"params", params_json(p)},
              {"determining_modes_formal", r.get("modes_thm31")},
              {"conditions", conds},
              {"empirical", empirical},
              {"smallest_synchronizing_m", first_pass}});
}

void verify(const ExperimentConfig& cfg, RunContext& ctx) {
  const std::vector<VerifyCheck> checks = run_verify_suite(cfg.seeds[0]);
  std::ofstream out(ctx.file("verify.csv"));
  out << "module,name,pass,value,limit\r\n";
  json list = json::array();
  int passed = 0;
  for (const auto& c : checks) {
    out << c.module << ',' << c.name << ',' << (c.pass ? 1 : 0) << ',' << fmt17(c.value) << ',' << fmt17(c.limit)
        << "\r\n";
    list.push_back({{"module", c.module}, {"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
    passed += c.pass;
    ctx.check(c.module + "." + c.name, c.pass, le(c.value, c.limit));
  }
  write_json(ctx, "verify.json", {{"checks", list}, {"passed", passed}, {"total", checks.size()}});
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, RunContext& ctx) {
  switch (cfg.experiment) {
    case Experiment::simulate: return simulate(cfg, ctx);
    case Experiment::steady: return steady(cfg, ctx);
    case Experiment::nudge: return nudge(cfg, ctx);
    case Experiment::wmap: return wmap(cfg, ctx);
    case Experiment::form: return form(cfg, ctx);
    case Experiment::bounds: return bounds(cfg, ctx);
    case Experiment::modes: return modes(cfg, ctx);
    case Experiment::verify: return verify(cfg, ctx);
  }
}

}  // namespace nlslab::detail
