#include "nlslab/nls_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"
#include "nlslab/errors.hpp"

namespace nlslab {
namespace {

constexpr cplx I{0, 1};

bool finite(const Field& u) { return u.is_finite(); }

void check_support(const Field& v, int m) {
  for (int k = -v.n(); k <= v.n(); ++k)
    if (std::abs(k) > m && v[k] != cplx{}) throw InvalidArgument("observation has energy outside |k| <= m");
}

std::size_t step_count(double span, double dt) {
  const double x = span / dt;
  const double r = std::round(x);
  if (r < 0 || std::abs(x - r) > 1e-6) throw InvalidArgument("time span is not a multiple of dt");
  return static_cast<std::size_t>(r);
}

}  // namespace

void NlsParams::validate() const {
  if (f.coeffs().empty()) throw InvalidArgument("forcing field not set");
  if (!std::isfinite(gamma) || gamma < 0 || (gamma == 0 && !diagnostic))
    throw InvalidArgument("gamma must be positive");
  if (f.is_zero() && !diagnostic) throw InvalidArgument("zero forcing is only allowed in diagnostic mode");
  if (!f.is_finite()) throw InvalidArgument("non-finite forcing");
  if (!std::isfinite(mu) || mu < 0) throw InvalidArgument("mu must be >= 0");
  if (m < 0 || m > grid().n) throw InvalidArgument("observed cutoff m outside [0, n]");
}

std::string to_string(Scheme s) {
  return s == Scheme::strang_splitstep ? "strang_splitstep" : "rk4_galerkin";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "strang_splitstep") return Scheme::strang_splitstep;
  if (s == "rk4_galerkin") return Scheme::rk4_galerkin;
  throw InvalidArgument("unknown scheme " + s);
}

void SchemeConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (sample_every < 1) throw InvalidArgument("sample_every must be >= 1");
}

Field rhs_decomposition_h(const Field& w, const NlsParams& p, const Field* v_now) {
  if (p.mu > 0 && v_now == nullptr) throw InvalidArgument("mu > 0 needs an observation");
  if (v_now) check_support(*v_now, p.m);
  Field h = cubic(w);
  h *= I;
  h.axpy(-p.gamma, w);
  h.axpy(-I, p.f);
  if (p.mu > 0) {
    h.axpy(-p.mu, project_low(w, p.m));
    h.axpy(p.mu, *v_now);
  }
  return h;
}

Field rhs(const Field& u, const NlsParams& p, const Field* v_now) {
  Field r = rhs_decomposition_h(u, p, v_now);
  r.axpy(I, derivative(u, 2));
  return r;
}

double hamiltonian(const Field& u) {
  const double l4 = norm(u, Norm::L4);
  const double ux = seminorm(u, 1);
  return ux * ux - 0.5 * l4 * l4 * l4 * l4;
}

Stepper::Stepper(const NlsParams& p, const SchemeConfig& cfg, const Trajectory* v_traj)
    : p_(p), cfg_(cfg), v_(v_traj) {
  p_.validate();
  cfg_.validate();
  const auto& g = p_.grid();
  if (p_.mu > 0 && v_ == nullptr) throw InvalidArgument("mu > 0 needs observations");
  if (p_.mu * cfg_.dt > 0.5) throw InvalidArgument("mu dt exceeds the 0.5 operating envelope");
  if (cfg_.scheme == Scheme::rk4_galerkin) {
    const double kmax = g.wavenumber(g.n);
    if (cfg_.dt * kmax * kmax > 2.8) throw InvalidArgument("rk4 step violates dt (2 pi n / L)^2 <= 2.8");
  }
  if (v_) {
    if (!(v_->grid() == g)) throw InvalidArgument("observations on a different grid");
    if (!v_->mode_cutoff() || *v_->mode_cutoff() > p_.m)
      for (const auto& f : v_->fields()) check_support(f, p_.m);
  }
  half_.resize(static_cast<std::size_t>(g.size()));
  nudge_.resize(static_cast<std::size_t>(g.size()));
  for (int k = -g.n; k <= g.n; ++k) {
    const double kk = g.wavenumber(k);
    half_[static_cast<std::size_t>(k + g.n)] = std::exp(cplx(-p_.gamma, -kk * kk) * (0.5 * cfg_.dt));
    nudge_[static_cast<std::size_t>(k + g.n)] = std::abs(k) <= p_.m ? p_.mu : 0.0;
  }
  for (Field* f : {&v0_, &v1_, &v2_, &k1_, &k2_, &k3_, &k4_, &tmp_, &a_, &b_, &mid_, &cub_}) *f = Field(g);
}

void Stepper::observation(double t, Field& v) {
  if (v_) v_->at_into(t, v);
}

void Stepper::rhs_into(const Field& u, const Field* v, Field& out) {
  const auto& g = p_.grid();
  const int n = g.n;
  detail::cubic(u.data(), n, g.n_phys, cub_.data());
  for (int k = -n; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k + n);
    const double kk = g.wavenumber(k);
    cplx r = -I * (kk * kk) * u[k] + I * cub_[k] - p_.gamma * u[k] - I * p_.f[k];
    if (nudge_[i] != 0) r -= nudge_[i] * (u[k] - (v ? (*v)[k] : cplx{}));
    out[k] = r;
  }
}

Field Stepper::rhs_at(const Field& u, double t) {
  observation(t, v0_);
  Field out(p_.grid());
  rhs_into(u, v_ ? &v0_ : nullptr, out);
  return out;
}

void Stepper::rk4(Field& u, double t) {
  const double dt = cfg_.dt;
  const int n = p_.grid().n;
  const Field* pv0 = nullptr;
  const Field* pv1 = nullptr;
  const Field* pv2 = nullptr;
  if (v_) {
    observation(t, v0_);
    observation(t + 0.5 * dt, v1_);
    observation(t + dt, v2_);
    pv0 = &v0_, pv1 = &v1_, pv2 = &v2_;
  }
  rhs_into(u, pv0, k1_);
  for (int k = -n; k <= n; ++k) tmp_[k] = u[k] + 0.5 * dt * k1_[k];
  rhs_into(tmp_, pv1, k2_);
  for (int k = -n; k <= n; ++k) tmp_[k] = u[k] + 0.5 * dt * k2_[k];
  rhs_into(tmp_, pv1, k3_);
  for (int k = -n; k <= n; ++k) tmp_[k] = u[k] + dt * k3_[k];
  rhs_into(tmp_, pv2, k4_);
  for (int k = -n; k <= n; ++k) u[k] += dt / 6.0 * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
}

// Linear half step, implicit midpoint rule for the remaining Galerkin terms,
// linear half step. The midpoint rule keeps the cubic substep mass neutral;
// the nudging part of it is diagonal and solved exactly inside the iteration.
void Stepper::strang(Field& u, double t) {
  const auto& g = p_.grid();
  const int n = g.n;
  const double dt = cfg_.dt;
  if (v_) observation(t + 0.5 * dt, v1_);
  for (int k = -n; k <= n; ++k) a_[k] = half_[static_cast<std::size_t>(k + n)] * u[k];
  // fixed part: a (1 - dt d / 2) + dt (mu v - i f); stored in k1_
  for (int k = -n; k <= n; ++k) {
    const double d = nudge_[static_cast<std::size_t>(k + n)];
    cplx r = a_[k] * (1 - 0.5 * dt * d) - I * dt * p_.f[k];
    if (v_ && d != 0) r += dt * d * v1_[k];
    k1_[k] = r;
    b_[k] = a_[k];
  }
  double prev = INFINITY;
  for (int it = 0; it < 60; ++it) {
    for (int k = -n; k <= n; ++k) mid_[k] = 0.5 * (a_[k] + b_[k]);
    detail::cubic(mid_.data(), n, g.n_phys, cub_.data());
    double diff = 0, scale = 0;
    for (int k = -n; k <= n; ++k) {
      const double d = nudge_[static_cast<std::size_t>(k + n)];
      const cplx nb = (k1_[k] + I * dt * cub_[k]) / (1 + 0.5 * dt * d);
      diff = std::max(diff, std::abs(nb - b_[k]));
      scale = std::max(scale, std::abs(nb));
      b_[k] = nb;
    }
    if (diff <= 1e-16 * scale || (it > 2 && diff >= prev)) break;
    prev = diff;
  }
  for (int k = -n; k <= n; ++k) u[k] = half_[static_cast<std::size_t>(k + n)] * b_[k];
}

void Stepper::step(Field& u, double t) {
  if (!(u.grid() == p_.grid())) throw InvalidArgument("state on a different grid");
  if (cfg_.scheme == Scheme::rk4_galerkin)
    rk4(u, t);
  else
    strang(u, t);
  if (!finite(u)) throw BlowUp(t + cfg_.dt);
}

Field step(const Field& u, double t, const NlsParams& p, const Trajectory* v_traj, const SchemeConfig& cfg) {
  Stepper s(p, cfg, v_traj);
  Field r = u;
  s.step(r, t);
  return r;
}

Field advance(const Field& u0, const NlsParams& p, const Trajectory* v_traj, double t0, double t1,
              const SchemeConfig& cfg) {
  Stepper s(p, cfg, v_traj);
  const std::size_t steps = step_count(t1 - t0, cfg.dt);
  if (v_traj && steps > 0 && !v_traj->covers(t0, t1)) throw InvalidArgument("observations do not cover the time span");
  if (!u0.is_finite()) throw InvalidArgument("non-finite initial state");
  Field u = u0;
  for (std::size_t i = 0; i < steps; ++i) s.step(u, t0 + static_cast<double>(i) * cfg.dt);
  return u;
}

Trajectory integrate(const Field& u0, const NlsParams& p, const Trajectory* v_traj, double t0, double t1,
                     const SchemeConfig& cfg) {
  Stepper s(p, cfg, v_traj);
  const std::size_t steps = step_count(t1 - t0, cfg.dt);
  const auto every = static_cast<std::size_t>(cfg.sample_every);
  if (steps == 0 || steps % every != 0)
    throw InvalidArgument("time span must hold a positive multiple of sample_every steps");
  if (v_traj && !v_traj->covers(t0, t1)) throw InvalidArgument("observations do not cover the time span");
  if (!u0.is_finite()) throw InvalidArgument("non-finite initial state");
  std::vector<Field> fields, derivs;
  fields.reserve(steps / every + 1);
  derivs.reserve(steps / every + 1);
  Field u = u0;
  fields.push_back(u);
  derivs.push_back(s.rhs_at(u, t0));
  for (std::size_t i = 0; i < steps; ++i) {
    s.step(u, t0 + static_cast<double>(i) * cfg.dt);
    if ((i + 1) % every == 0) {
      const double t = t0 + static_cast<double>(i + 1) * cfg.dt;
      fields.push_back(u);
      derivs.push_back(s.rhs_at(u, t));
    }
  }
  return Trajectory(u0.grid(), t0, cfg.dt * static_cast<double>(every), std::move(fields), std::move(derivs));
}

Stationarity stationarity(const Trajectory& u, double tol) {
  const std::size_t N = u.size();
  std::vector<double> t(N), mass(N), h1(N);
  for (std::size_t i = 0; i < N; ++i) {
    t[i] = u.time(i);
    const double a = norm(u.field(i), Norm::L2);
    const double b = norm(u.field(i), Norm::H1);
    mass[i] = a * a;
    h1[i] = b * b;
  }
  auto fit = [&](const std::vector<double>& y, double& mean, double& trend) {
    double tm = 0, ym = 0;
    for (std::size_t i = 0; i < N; ++i) tm += t[i], ym += y[i];
    tm /= static_cast<double>(N);
    ym /= static_cast<double>(N);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < N; ++i) sxy += (t[i] - tm) * (y[i] - ym), sxx += (t[i] - tm) * (t[i] - tm);
    mean = ym;
    trend = sxx > 0 ? sxy / sxx * (t.back() - t.front()) : 0.0;
  };
  Stationarity s;
  fit(mass, s.mass_mean, s.mass_trend);
  fit(h1, s.h1_mean, s.h1_trend);
  s.stationary = std::abs(s.mass_trend) <= tol * std::max(s.mass_mean, 1e-300) &&
                 std::abs(s.h1_trend) <= tol * std::max(s.h1_mean, 1e-300);
  return s;
}

Field random_initial_condition(const SpectralGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Field u(grid);
  for (int k = -grid.n; k <= grid.n; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u[k] = 0.1 * std::exp(-0.5 * std::abs(k)) * cplx(re, im);
  }
  return u;
}

AttractorSample attractor_sample_from(const NlsParams& p, const Field& u0, double spinup, double window,
                                      const SchemeConfig& cfg) {
  if (p.mu != 0) throw InvalidArgument("attractor samples use mu = 0");
  if (!(p.gamma > 0) || spinup < 10 / p.gamma) throw InvalidArgument("spin-up shorter than 10 / gamma");
  const Field start = advance(u0, p, nullptr, 0.0, spinup, cfg);
  Trajectory w = integrate(start, p, nullptr, 0.0, window, cfg);
  Stationarity st = stationarity(w);
  return AttractorSample{std::move(w), st};
}

AttractorSample attractor_sample(const NlsParams& p, double spinup, double window, std::uint64_t seed,
                                 const SchemeConfig& cfg) {
  return attractor_sample_from(p, random_initial_condition(p.grid(), seed), spinup, window, cfg);
}

}  // namespace nlslab
