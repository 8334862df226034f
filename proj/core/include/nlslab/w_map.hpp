#pragma once

#include <vector>

#include "nlslab/bounds.hpp"
#include "nlslab/nls_dynamics.hpp"
#include "nlslab/trajectory.hpp"

namespace nlslab {

struct WmapConfig {
  double spinup_k = 40;
  double tol_converged = 1e-10;  // sup-L2 distance between the k and 2k runs
  int max_restarts = 3;          // spin-up doublings before giving up
  bool certify = true;
  SchemeConfig scheme;  // sample_every is derived from the observation spacing

  void validate() const;
};

struct WmapResult {
  Trajectory w;  // on v's lattice
  double certificate = 0;  // sup-L2 distance to the run with half the spin-up
  double spinup_used = 0;
  int restarts = 0;
};

// Bounded solution of the nudged equation driven by v: integrate from
// `start` (zero if null) at v.s0() - spinup over the constant pre-pad of v.
// The returned window comes from the longer of the two certified runs.
WmapResult evaluate_W(const Trajectory& v, const NlsParams& p, const WmapConfig& cfg, const Field* start = nullptr);

struct SyncReport {
  std::vector<double> s;      // offsets from the window start
  std::vector<double> delta;  // ||w(s) - u(s)||
  double fitted_rate = 0;     // -slope of log delta
  double fit_from = 0, fit_to = 0;
  double time_below = -1;  // first s with delta < floor, -1 if never
  double floor = 1e-6;
  double horizon = 100;
  bool pass = false;  // delta < floor by s <= horizon and rate > 0
};

// Nudges w from zero at the start of u's window towards P_m u and records the
// decay of ||w - u||. u must be a mu = 0 solution sampled with derivatives.
SyncReport sync_experiment(const Trajectory& u, const NlsParams& p, const SchemeConfig& scheme, double floor = 1e-6,
                           double horizon = 100);

struct LipschitzReport {
  double numerator = 0;    // |P_m W(v) - P_m W(vt)|_X
  double denominator = 0;  // |v - vt|_X
  double ratio = 0;
  double rho = 0;  // max(|v|_X, |vt|_X)
  double LW = 0;
};

// `bounds` supplies c, xi and L; gamma, norm_f, mu, m and v_X = rho are
// taken from the arguments.
LipschitzReport lipschitz_probe(const Trajectory& v, const Trajectory& vt, const NlsParams& p, const WmapConfig& cfg,
                                const BoundsInput& bounds);

struct ReversePoincareReport {
  double sup_dx = 0, sup_d = 0, ratio = 0;
  double K11 = 0;
  // max over samples and cutoffs m of ||Q_m d|| - L ||d_x|| / (2 pi (m+1))
  double poincare_excess = 0;
};

ReversePoincareReport reverse_poincare_check(const Trajectory& u, const Trajectory& ut, const BoundsInput& bounds);

// sup_s ||P_m(a - b)|| + sup_s ||P_m(a_s - b_s)|| on a shared lattice.
double projected_X_distance(const Trajectory& a, const Trajectory& b, int m);

}  // namespace nlslab
