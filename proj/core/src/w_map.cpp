#include "nlslab/w_map.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/errors.hpp"

namespace nlslab {
namespace {

SchemeConfig matched_scheme(const SchemeConfig& base, double ds) {
  SchemeConfig s = base;
  const double ratio = ds / base.dt;
  s.sample_every = static_cast<int>(std::lround(ratio));
  if (s.sample_every < 1 || std::abs(ratio - s.sample_every) > 1e-9 * ratio)
    throw InvalidArgument("observation spacing must be a multiple of dt");
  return s;
}

// Run from v.s0() - pad and return the samples on v's window.
Trajectory run_window(const Trajectory& v, const NlsParams& p, const SchemeConfig& scheme, double pad,
                      const Field* start) {
  const Trajectory vext = extend_constant(v, pad, 0);
  const Field zero(p.grid());
  const Field w0 = advance(start ? *start : zero, p, &vext, vext.s0(), v.s0(), scheme);
  Trajectory w = integrate(w0, p, &vext, v.s0(), v.end_time(), scheme);
  w.set_pads(v.pad_before(), v.pad_after());
  return w;
}

double sup_l2_distance(const Trajectory& a, const Trajectory& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, norm(a.field(i) - b.field(i), Norm::L2));
  return d;
}

void require_same_lattice(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size() || std::abs(a.s0() - b.s0()) > 1e-9 * a.ds() ||
      std::abs(a.ds() - b.ds()) > 1e-12 * a.ds() || !(a.grid() == b.grid()))
    throw InvalidArgument("trajectories are sampled on different lattices");
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < x.size(); ++i) xm += x[i], ym += y[i];
  xm /= n;
  ym /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - xm) * (y[i] - ym), sxx += (x[i] - xm) * (x[i] - xm);
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

void WmapConfig::validate() const {
  if (!(spinup_k > 0)) throw InvalidArgument("spinup_k must be positive");
  if (!(tol_converged > 0)) throw InvalidArgument("tol_converged must be positive");
  if (max_restarts < 0) throw InvalidArgument("max_restarts must be >= 0");
  scheme.validate();
}

WmapResult evaluate_W(const Trajectory& v, const NlsParams& p, const WmapConfig& cfg, const Field* start) {
  cfg.validate();
  p.validate();
  if (!(v.grid() == p.grid())) throw InvalidArgument("observation grid differs from the forcing grid");
  if (v.mode_cutoff() != p.m) throw InvalidArgument("observations must carry mode_cutoff = m");
  const SchemeConfig scheme = matched_scheme(cfg.scheme, v.ds());
  double pad = std::ceil(cfg.spinup_k / v.ds() - 1e-9) * v.ds();

  Trajectory w = run_window(v, p, scheme, pad, start);
  if (!cfg.certify) return WmapResult{std::move(w), 0.0, pad, 0};
  for (int restart = 0;; ++restart) {
    Trajectory longer = run_window(v, p, scheme, 2 * pad, start);
    const double dist = sup_l2_distance(w, longer);
    if (dist < cfg.tol_converged) return WmapResult{std::move(longer), dist, 2 * pad, restart};
    if (restart == cfg.max_restarts) throw NotConverged(dist);
    w = std::move(longer);
    pad *= 2;
  }
}

SyncReport sync_experiment(const Trajectory& u, const NlsParams& p, const SchemeConfig& scheme, double floor,
                           double horizon) {
  p.validate();
  const Trajectory v = project_low_traj(u, p.m);
  const SchemeConfig sc = matched_scheme(scheme, u.ds());
  const Trajectory w = integrate(Field(p.grid()), p, &v, u.s0(), u.end_time(), sc);

  SyncReport r;
  r.floor = floor;
  r.horizon = horizon;
  for (std::size_t i = 0; i < u.size(); ++i) {
    r.s.push_back(u.time(i) - u.s0());
    r.delta.push_back(norm(w.field(i) - u.field(i), Norm::L2));
    if (r.time_below < 0 && r.delta.back() < floor) r.time_below = r.s.back();
  }

  // Fit between the first halving and the arrival at the numerical floor
  // (ten times the smallest distance seen), else over the final two thirds.
  const std::size_t n = r.delta.size();
  const double roundoff = 1e-12 * std::max(1.0, norm_X0(u));
  const double plateau = 10 * std::max(roundoff, *std::min_element(r.delta.begin(), r.delta.end()));
  std::size_t a = n, b = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (r.delta[i] < 0.5 * r.delta[0]) {
      a = i;
      break;
    }
  for (std::size_t i = a; i < n && r.delta[i] > plateau; ++i) b = i + 1;
  if (a >= n || b < a + 3) {
    a = n / 3;
    b = n;
  }
  std::vector<double> x, y;
  for (std::size_t i = a; i < b; ++i) {
    x.push_back(r.s[i]);
    y.push_back(std::log(std::max(r.delta[i], 1e-300)));
  }
  r.fit_from = r.s[a];
  r.fit_to = r.s[b - 1];
  r.fitted_rate = -slope(x, y);
  r.pass = r.time_below >= 0 && r.time_below <= horizon && r.fitted_rate > 0;
  return r;
}

double projected_X_distance(const Trajectory& a, const Trajectory& b, int m) {
  require_same_lattice(a, b);
  double d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d0 = std::max(d0, norm(project_low(a.field(i) - b.field(i), m), Norm::L2));
    d1 = std::max(d1, norm(project_low(a.deriv(i) - b.deriv(i), m), Norm::L2));
  }
  return d0 + d1;
}

LipschitzReport lipschitz_probe(const Trajectory& v, const Trajectory& vt, const NlsParams& p, const WmapConfig& cfg,
                                const BoundsInput& bounds) {
  require_same_lattice(v, vt);
  LipschitzReport r;
  r.denominator = norm_X(difference(v, vt));
  if (!(r.denominator > 0)) throw InvalidArgument("observations coincide");
  const WmapResult w = evaluate_W(v, p, cfg);
  const WmapResult wt = evaluate_W(vt, p, cfg);
  r.numerator = projected_X_distance(w.w, wt.w, p.m);
  r.ratio = r.numerator / r.denominator;
  r.rho = std::max(norm_X(v), norm_X(vt));

  BoundsInput in = bounds;
  in.gamma = p.gamma;
  in.L = p.grid().L;
  in.norm_f = norm(p.f, Norm::L2);
  in.mu = p.mu;
  in.m = p.m;
  in.v_X = r.rho;
  r.LW = compute_report(in).LW;
  return r;
}

ReversePoincareReport reverse_poincare_check(const Trajectory& u, const Trajectory& ut, const BoundsInput& bounds) {
  require_same_lattice(u, ut);
  const SpectralGrid& g = u.grid();
  ReversePoincareReport r;
  r.poincare_excess = -INFINITY;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Field d = u.field(i) - ut.field(i);
    const double dx = seminorm(d, 1);
    r.sup_d = std::max(r.sup_d, norm(d, Norm::L2));
    r.sup_dx = std::max(r.sup_dx, dx);
    for (int m = 0; m <= g.n; ++m) {
      const double q = norm(project_high(d, m), Norm::L2);
      r.poincare_excess = std::max(r.poincare_excess, q - g.L / (2 * pi * (m + 1)) * dx);
    }
  }
  if (!(r.sup_d > 0)) throw InvalidArgument("trajectories coincide");
  r.ratio = r.sup_dx / r.sup_d;
  r.K11 = compute_report(bounds).K11;
  return r;
}

}  // namespace nlslab
