#pragma once

#include <string>
#include <vector>

#include "nlslab/nls_dynamics.hpp"
#include "nlslab/trajectory.hpp"
#include "nlslab/w_map.hpp"

namespace nlslab {

// dv/dt = -|v - P_m W(v)|_{X,0}^2 (v - P_m u*)
struct FormState {
  Trajectory v;  // mode_cutoff m
  Field u_star;
  double t = 0;
  double residual = 0;  // |v - P_m W(v)|_{X,0}
  double R = 0;         // ball radius R_0^0 + R'^0
};

struct FormConfig {
  WmapConfig wmap;
  double dt_form = 1;       // pseudo-time step cap
  double max_gain = 0.1;    // h residual^2 <= max_gain
  double tol = 1e-6;        // steady when residual < tol
  double stagnation = 1e-10;  // or when |dv|_X per step drops below this

  void validate() const;
};

struct FormTangent {
  Trajectory F;
  double residual = 0;
};

// sup_s ||v(s) - P_m W(v)(s)||
double steady_state_residual(const Trajectory& v, const NlsParams& p, const WmapConfig& cfg);

FormTangent vector_field_F(const FormState& state, const NlsParams& p, const WmapConfig& cfg);

struct FormRecord {
  double t = 0;
  double residual = 0;
  double dist_X = 0;  // |v - P_m u*|_X
  double lambda = 1;  // v = P_m u* + lambda (v0 - P_m u*)
  double collinearity_defect = 0;
};

struct FormEvolution {
  std::vector<FormRecord> records;
  FormState final_state;
  bool converged = false;
  bool stagnated = false;
  bool ball_exit = false;  // |v - P_m u*|_X >= 3R at some step
  bool monotone = true;    // distance never increased
  double max_collinearity_defect = 0;
};

// |v - P_m u*|_X for the time-independent target u*.
double distance_to_target(const Trajectory& v, const Field& u_star, int m);

// Explicit Euler in pseudo-time with h = min(dt_form, max_gain / residual^2).
FormEvolution evolve_form(const FormState& state0, int steps, const NlsParams& p, const FormConfig& cfg);

// t, residual, dist_to_Pmustar_X, lambda
void write_form_csv(const std::string& path, const FormEvolution& e);

}  // namespace nlslab
