#pragma once

#include <cstdint>
#include <string>

#include "nlslab/spectral_field.hpp"
#include "nlslab/trajectory.hpp"

namespace nlslab {

// i u_t + u_xx + |u|^2 u + i gamma u = f - i mu (P_m u - v)
struct NlsParams {
  double gamma = 1;
  Field f;
  double mu = 0;
  int m = 0;
  // Allows gamma = 0 and f = 0 (integrable limit checks).
  bool diagnostic = false;

  const SpectralGrid& grid() const { return f.grid(); }
  void validate() const;
};

enum class Scheme { strang_splitstep, rk4_galerkin };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Operating envelope: rk4_galerkin needs dt (2 pi n / L)^2 <= 2.8; both
// schemes are used with mu dt <= 0.5.
struct SchemeConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::strang_splitstep;
  int sample_every = 1;

  void validate() const;
};

// u_t = i u_xx + i P_n(|u|^2 u) - gamma u - i f - mu (P_m u - v).
// v_now may be null only when mu = 0.
Field rhs(const Field& u, const NlsParams& p, const Field* v_now = nullptr);

// h = i P_n(|w|^2 w) - gamma w - mu P_m w + mu v - i f, so that w_s = i w_xx + h.
Field rhs_decomposition_h(const Field& w, const NlsParams& p, const Field* v_now = nullptr);

// ||u_x||^2 - 1/2 ||u||_L4^4
double hamiltonian(const Field& u);

// Advances fields with a fixed scheme. Observations come from v_traj through
// cubic Hermite interpolation and must be supported on |k| <= m.
class Stepper {
public:
  Stepper(const NlsParams& p, const SchemeConfig& cfg, const Trajectory* v_traj = nullptr);

  // u(t) -> u(t + dt)
  void step(Field& u, double t);
  Field rhs_at(const Field& u, double t);

  const NlsParams& params() const { return p_; }
  const SchemeConfig& config() const { return cfg_; }

private:
  void observation(double t, Field& v);
  void rhs_into(const Field& u, const Field* v, Field& out);
  void strang(Field& u, double t);
  void rk4(Field& u, double t);

  NlsParams p_;
  SchemeConfig cfg_;
  const Trajectory* v_;
  std::vector<cplx> half_;   // exp((-i k^2 - gamma) dt / 2)
  std::vector<double> nudge_;  // mu on |k| <= m
  Field v0_, v1_, v2_, k1_, k2_, k3_, k4_, tmp_, a_, b_, mid_, cub_;
};

Field step(const Field& u, double t, const NlsParams& p, const Trajectory* v_traj, const SchemeConfig& cfg);

// Integrates from t0 to t1; (t1 - t0) must be a multiple of dt * sample_every.
// Samples include derivatives from the right-hand side at the sample times.
Trajectory integrate(const Field& u0, const NlsParams& p, const Trajectory* v_traj, double t0, double t1,
                     const SchemeConfig& cfg);
// Same stepping without storing samples.
Field advance(const Field& u0, const NlsParams& p, const Trajectory* v_traj, double t0, double t1,
              const SchemeConfig& cfg);

// u_xx + P_n(|u|^2 u) + i gamma u - f
Field steady_residual(const Field& u, const NlsParams& p);

struct SteadyStateOptions {
  int max_iterations = 100;
  double tol_factor = 1e-10;  // residual <= tol_factor * max(1, ||f||)
};

struct SteadyState {
  Field u;
  double residual = 0;
  int iterations = 0;
};

// Damped Newton on the real/imaginary split with a dense Jacobian.
SteadyState find_steady_state(const NlsParams& p, const Field& guess, const SteadyStateOptions& opt = {});

// Solution of (d_xx + i gamma) u = f.
Field linear_response(const NlsParams& p);

// Newton along the forcing path s f, s = 1/steps, 2/steps, ..., 1, starting
// from the linear response; each stage seeds the next. Halves the stage
// length on failure, at most `steps * 64` stages in total.
SteadyState steady_state_by_continuation(const NlsParams& p, int steps = 8, const SteadyStateOptions& opt = {});

struct Stationarity {
  double mass_mean = 0;
  double mass_trend = 0;  // fitted slope times window length
  double h1_mean = 0;
  double h1_trend = 0;
  bool stationary = false;
};

Stationarity stationarity(const Trajectory& u, double tol = 0.1);

struct AttractorSample {
  Trajectory window;
  Stationarity diagnostics;
};

// Seeded random data of size 0.1 with exp(-|k|/2) spectrum.
Field random_initial_condition(const SpectralGrid& grid, std::uint64_t seed);

// Integrates the mu = 0 equation from seeded data, discards the spin-up and
// returns the window. Requires spinup >= 10 / gamma.
AttractorSample attractor_sample(const NlsParams& p, double spinup, double window, std::uint64_t seed,
                                 const SchemeConfig& cfg);
// Same protocol from a given start state.
AttractorSample attractor_sample_from(const NlsParams& p, const Field& u0, double spinup, double window,
                                      const SchemeConfig& cfg);

}  // namespace nlslab
