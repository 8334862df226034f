#include "nlslab/determining_form.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "format.hpp"
#include "nlslab/errors.hpp"

namespace nlslab {
namespace {

Trajectory residual_field(const Trajectory& v, const NlsParams& p, const WmapConfig& cfg) {
  const WmapResult w = evaluate_W(v, p, cfg);
  return difference(v, project_low_traj(w.w, p.m));
}

void require_low_mode(const Trajectory& v, const NlsParams& p) {
  if (v.mode_cutoff() != p.m) throw InvalidArgument("form state must carry mode_cutoff = m");
}

}  // namespace

void FormConfig::validate() const {
  wmap.validate();
  if (!(dt_form > 0) || !(max_gain > 0) || !(max_gain < 1)) throw InvalidArgument("bad pseudo-time step control");
  if (!(tol > 0) || !(stagnation >= 0)) throw InvalidArgument("bad form tolerances");
}

double steady_state_residual(const Trajectory& v, const NlsParams& p, const WmapConfig& cfg) {
  require_low_mode(v, p);
  return norm_X0(residual_field(v, p, cfg));
}

double distance_to_target(const Trajectory& v, const Field& u_star, int m) {
  const Field target = project_low(u_star, m);
  double d0 = 0;
  for (const auto& f : v.fields()) d0 = std::max(d0, norm(f - target, Norm::L2));
  return d0 + sup_deriv_norm(v);
}

FormTangent vector_field_F(const FormState& state, const NlsParams& p, const WmapConfig& cfg) {
  require_low_mode(state.v, p);
  const double res = steady_state_residual(state.v, p, cfg);
  const Field target = project_low(state.u_star, p.m);
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    f.push_back(-(res * res) * (state.v.field(i) - target));
    d.push_back(-(res * res) * state.v.deriv(i));
  }
  return FormTangent{Trajectory(state.v.grid(), state.v.s0(), state.v.ds(), std::move(f), std::move(d), p.m), res};
}

FormEvolution evolve_form(const FormState& state0, int steps, const NlsParams& p, const FormConfig& cfg) {
  cfg.validate();
  require_low_mode(state0.v, p);
  const Field target = project_low(state0.u_star, p.m);
  const Trajectory& v0 = state0.v;
  std::vector<Field> offset0;
  double scale = 0;
  for (const auto& f : v0.fields()) {
    offset0.push_back(f - target);
    scale = std::max(scale, norm(offset0.back(), Norm::L2));
  }

  FormEvolution e{.records = {}, .final_state = state0};
  FormState& s = e.final_state;
  double lambda = 1;
  double dist = distance_to_target(s.v, s.u_star, p.m);
  for (int k = 0;; ++k) {
    const FormTangent F = vector_field_F(s, p, cfg.wmap);
    s.residual = F.residual;

    double defect = 0;
    for (std::size_t i = 0; i < s.v.size(); ++i)
      defect = std::max(defect, norm(s.v.field(i) - target - lambda * offset0[i], Norm::L2));
    if (scale > 0) defect /= scale;
    e.max_collinearity_defect = std::max(e.max_collinearity_defect, defect);
    e.records.push_back({s.t, s.residual, dist, lambda, defect});
    if (s.R > 0 && dist >= 3 * s.R) e.ball_exit = true;

    if (s.residual < cfg.tol) {
      e.converged = true;
      break;
    }
    if (k == steps) break;
    const double r2 = s.residual * s.residual;
    const double h = std::min(cfg.dt_form, cfg.max_gain / r2);
    s.v = sum(s.v, scaled(F.F, h));
    s.t += h;
    lambda *= 1 - h * r2;
    const double moved = h * r2 * dist;
    const double next = distance_to_target(s.v, s.u_star, p.m);
    if (next > dist) e.monotone = false;
    dist = next;
    if (moved < cfg.stagnation) {
      e.stagnated = true;
      s.residual = steady_state_residual(s.v, p, cfg.wmap);
      e.records.push_back({s.t, s.residual, dist, lambda, defect});
      e.converged = s.residual < cfg.tol;
      break;
    }
  }
  return e;
}

void write_form_csv(const std::string& path, const FormEvolution& e) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << "t,residual,dist_to_Pmustar_X,lambda\r\n";
  for (const auto& r : e.records)
    out << detail::fmt17(r.t) << ',' << detail::fmt17(r.residual) << ',' << detail::fmt17(r.dist_X) << ','
        << detail::fmt17(r.lambda) << "\r\n";
}

}  // namespace nlslab
