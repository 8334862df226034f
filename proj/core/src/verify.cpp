#include <cmath>
#include <functional>
#include <random>

#include "nlslab/bounds.hpp"
#include "nlslab/determining_form.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/w_map.hpp"

namespace nlslab {
namespace {

Field three_mode_forcing(const SpectralGrid& g) {
  Field f(g);
  f[-1] = f[0] = f[1] = 1 / std::sqrt(3.0);
  return f;
}

// (|u|^2 u)_k = sum over a - b + c = k of u_a conj(u_b) u_c
Field direct_cubic(const Field& u) {
  const int n = u.n();
  Field r(u.grid());
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b)
      for (int c = -n; c <= n; ++c) {
        const int k = a - b + c;
        if (std::abs(k) <= n) r[k] += u[a] * std::conj(u[b]) * u[c];
      }
  return r;
}

double plane_wave_error(double dt) {
  const auto g = SpectralGrid::make(2 * pi, 8);
  const NlsParams p{0.0, Field(g), 0, 0, true};
  const double a = 0.5, T = 0.5;
  const Field u = advance(Field::mode(g, 1, a), p, nullptr, 0, T, {dt, Scheme::strang_splitstep, 1});
  const double omega = 1 - a * a;
  return norm(u - Field::mode(g, 1, a * std::exp(cplx(0, -omega * T))), Norm::L2);
}

double mass_residual(double dt) {
  const auto g = SpectralGrid::make(2 * pi, 8);
  const NlsParams p0{0.5, three_mode_forcing(g), 0, 4, false};
  const Field u0 = advance(random_initial_condition(g, 3), p0, nullptr, 0, 1, {1e-3, Scheme::strang_splitstep, 1});
  const SchemeConfig c{dt, Scheme::strang_splitstep, 1};
  const Trajectory u = integrate(u0, p0, nullptr, 0, 1.5, c);
  NlsParams p = p0;
  p.mu = 10;
  const Trajectory v = project_low_traj(u, p.m);
  const Trajectory w = integrate(Field(g), p, &v, 0, 1.5, c);
  return max_residual(mass_series(restrict_window(w, 1, 1.5), v, p));
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(std::uint64_t seed) {
  std::vector<VerifyCheck> out;
  auto add = [&](const std::string& module, const std::string& name, double value, double limit) {
    out.push_back({module, name, value <= limit, value, limit});
  };
  auto guarded = [&](const std::string& module, const std::string& name, double limit,
                     const std::function<double()>& fn) {
    try {
      add(module, name, fn(), limit);
    } catch (const Error&) {
      out.push_back({module, name, false, NAN, limit});
    }
  };
  std::mt19937_64 rng(seed);

  const auto g8 = SpectralGrid::make(2 * pi, 8);
  const Field r8 = random_field(g8, rng, 1.0);
  guarded("spectral_field", "parseval", 1e-14, [&] {
    const double a = norm(r8, Norm::L2);
    return std::abs(a * a - inner(r8, r8).real()) / (a * a);
  });
  guarded("spectral_field", "cubic_vs_direct_convolution", 1e-13,
          [&] { return norm(cubic(r8) - direct_cubic(r8), Norm::L2) / norm(direct_cubic(r8), Norm::L2); });
  guarded("spectral_field", "derivative_of_mode", 1e-14, [&] {
    const Field e = Field::mode(g8, 3, 1.0);
    return std::abs(seminorm(e, 1) - 3 * norm(e, Norm::L2)) / (3 * norm(e, Norm::L2));
  });
  guarded("spectral_field", "agmon_within_calibrated_c", 0, [&] {
    const auto g = SpectralGrid::make(2 * pi, 16);
    const double c = calibrate_agmon_constant(g, 200, seed);
    double worst = 0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, agmon_ratio(random_field(g, rng, 0.5 + 0.05 * i)) - c);
    return worst;
  });

  guarded("nls_dynamics", "plane_wave_order", 0.4,
          [&] { return std::abs(plane_wave_error(2e-3) / plane_wave_error(1e-3) - 4); });
  guarded("nls_dynamics", "mass_conservation", 1e-10, [&] {
    const NlsParams p{0.0, Field(g8), 0, 0, true};
    const Field u0 = 0.3 * random_field(g8, rng, 2.0);
    const Field u = advance(u0, p, nullptr, 0, 1, {1e-3, Scheme::strang_splitstep, 1});
    const double a = norm(u0, Norm::L2), b = norm(u, Norm::L2);
    return std::abs(b * b - a * a) / (a * a);
  });
  guarded("nls_dynamics", "steady_state_residual", 1e-10, [&] {
    const NlsParams p{0.5, three_mode_forcing(g8), 0, 4, false};
    const SteadyState s = steady_state_by_continuation(p);
    return norm(steady_residual(s.u, p), Norm::L2) / std::max(1.0, norm(p.f, Norm::L2));
  });

  guarded("trajectory_space", "derivative_consistency", 1, [&] {
    const NlsParams p{0.5, three_mode_forcing(g8), 0, 4, false};
    const Trajectory u = integrate(random_initial_condition(g8, seed), p, nullptr, 0, 1, {1e-3, Scheme::rk4_galerkin, 10});
    const DerivativeConsistency d = check_derivative_consistency(u);
    return d.defect / d.tolerance;
  });
  guarded("trajectory_space", "hermite_exact_at_nodes", 0, [&] {
    const NlsParams p{0.5, three_mode_forcing(g8), 0, 4, false};
    const Trajectory u = integrate(random_initial_condition(g8, seed), p, nullptr, 0, 0.1, {1e-3, Scheme::rk4_galerkin, 10});
    double d = 0;
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, norm(u.at(u.time(i)) - u.field(i), Norm::L2));
    return d;
  });

  guarded("lyapunov_functionals", "mass_balance_order", 0.5,
          [&] { return std::abs(mass_residual(1e-3) / mass_residual(5e-4) - 4); });
  guarded("lyapunov_functionals", "phi_balance", 1e-4, [&] {
    const NlsParams p0{0.5, three_mode_forcing(g8), 0, 4, false};
    const SchemeConfig c{5e-4, Scheme::strang_splitstep, 1};
    const Field u0 = advance(random_initial_condition(g8, seed), p0, nullptr, 0, 10, c);
    const Trajectory u = integrate(u0, p0, nullptr, 0, 1.5, c);
    NlsParams p = p0;
    p.mu = 10;
    const Trajectory v = project_low_traj(u, p.m);
    const Trajectory w = integrate(Field(g8), p, &v, 0, 1.5, c);
    return max_residual(phi_series(restrict_window(w, 1, 1.5), v, p));
  });

  guarded("w_map", "steady_fixed_point", 1e-8, [&] {
    NlsParams p{0.5, three_mode_forcing(g8), 0, 4, false};
    const SteadyState s = steady_state_by_continuation(p);
    p.mu = 10;
    WmapConfig cfg;
    cfg.spinup_k = 20;
    cfg.scheme = {2.5e-3, Scheme::rk4_galerkin, 1};
    const Trajectory v = Trajectory::constant(project_low(s.u, p.m), 0, 0.01, 11, p.m);
    const WmapResult w = evaluate_W(v, p, cfg);
    double d = 0;
    for (const auto& f : w.w.fields()) d = std::max(d, norm(f - s.u, Norm::H2));
    return d;
  });

  guarded("determining_form", "F_vanishes_at_target", 0, [&] {
    NlsParams p{0.5, three_mode_forcing(g8), 0, 4, false};
    const SteadyState s = steady_state_by_continuation(p);
    p.mu = 10;
    WmapConfig cfg;
    cfg.spinup_k = 20;
    cfg.certify = false;
    cfg.scheme = {2.5e-3, Scheme::rk4_galerkin, 1};
    const FormState st{Trajectory::constant(project_low(s.u, p.m), 0, 0.01, 11, p.m), s.u, 0, 0, 0};
    const FormTangent F = vector_field_F(st, p, cfg);
    double d = 0;
    for (const auto& f : F.F.fields()) d = std::max(d, norm(f, Norm::L2));
    return d;
  });

  const BoundsReport rep = compute_report(BoundsInput{});
  guarded("bounds_calculator", "entries_finite_positive", 0, [&] {
    double bad = 0;
    for (const auto& [name, v] : rep.entries())
      if (!std::isfinite(v) || (v <= 0 && name != "modes_thm31")) bad += 1;
    return bad;
  });
  guarded("bounds_calculator", "min_m_is_minimal", 0, [&] {
    double bad = 0;
    for (const auto& c : rep.conditions) {
      if (!c.min_m) continue;
      const double m = *c.min_m;
      for (const auto& d : check_conditions(rep, m, rep.input.mu))
        if (d.name == c.name && !d.holds) bad += 1;
      if (m > 0)
        for (const auto& d : check_conditions(rep, m - 1, rep.input.mu))
          if (d.name == c.name && d.holds) bad += 1;
    }
    return bad;
  });
  return out;
}

}  // namespace nlslab
