#include <Eigen/Dense>
#include <cmath>

#include "kernels.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/nls_dynamics.hpp"

namespace nlslab {
namespace {

constexpr cplx I{0, 1};

Eigen::VectorXd pack(const Field& u) {
  Eigen::VectorXd x(2 * u.grid().size());
  for (int j = 0; j < u.grid().size(); ++j) {
    x[2 * j] = u.data()[j].real();
    x[2 * j + 1] = u.data()[j].imag();
  }
  return x;
}

Field unpack(const SpectralGrid& g, const Eigen::VectorXd& x) {
  Field u(g);
  for (int j = 0; j < g.size(); ++j) u.data()[j] = {x[2 * j], x[2 * j + 1]};
  return u;
}

// Coefficients |q| <= 2n of 2|u|^2 and u^2, indexed q + 2n.
void product_coefficients(const Field& u, std::vector<cplx>& A, std::vector<cplx>& B) {
  const auto& g = u.grid();
  const int N = g.n_phys;
  std::vector<cplx> x(static_cast<std::size_t>(N)), a(static_cast<std::size_t>(N)), b(static_cast<std::size_t>(N));
  detail::to_physical(u.data(), g.n, N, x.data());
  for (int j = 0; j < N; ++j) {
    a[static_cast<std::size_t>(j)] = 2 * std::norm(x[static_cast<std::size_t>(j)]);
    b[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  }
  A.assign(static_cast<std::size_t>(4 * g.n + 1), cplx{});
  B.assign(static_cast<std::size_t>(4 * g.n + 1), cplx{});
  detail::from_physical(a.data(), N, 2 * g.n, A.data());
  detail::from_physical(b.data(), N, 2 * g.n, B.data());
}

Eigen::MatrixXd jacobian(const Field& u, const NlsParams& p) {
  const auto& g = u.grid();
  const int n = g.n;
  std::vector<cplx> A, B;
  product_coefficients(u, A, B);
  const int M = g.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  for (int k = -n; k <= n; ++k) {
    const double kk = g.wavenumber(k);
    for (int j = -n; j <= n; ++j) {
      cplx da = A[static_cast<std::size_t>(k - j + 2 * n)] + B[static_cast<std::size_t>(k + j + 2 * n)];
      cplx db = I * A[static_cast<std::size_t>(k - j + 2 * n)] - I * B[static_cast<std::size_t>(k + j + 2 * n)];
      if (j == k) {
        const cplx lin(-kk * kk, p.gamma);
        da += lin;
        db += I * lin;
      }
      const int r = 2 * (k + n), c = 2 * (j + n);
      J(r, c) = da.real();
      J(r + 1, c) = da.imag();
      J(r, c + 1) = db.real();
      J(r + 1, c + 1) = db.imag();
    }
  }
  return J;
}

}  // namespace

Field steady_residual(const Field& u, const NlsParams& p) {
  Field r = derivative(u, 2);
  r += cubic(u);
  r.axpy(I * p.gamma, u);
  r -= p.f;
  return r;
}

Field linear_response(const NlsParams& p) {
  const auto& g = p.grid();
  Field u(g);
  for (int k = -g.n; k <= g.n; ++k) {
    const double kk = g.wavenumber(k);
    u[k] = p.f[k] / cplx(-kk * kk, p.gamma);
  }
  return u;
}

SteadyState find_steady_state(const NlsParams& p, const Field& guess, const SteadyStateOptions& opt) {
  p.validate();
  if (p.mu != 0) throw InvalidArgument("steady states are computed for mu = 0");
  if (!guess.is_finite() || !(guess.grid() == p.grid())) throw InvalidArgument("bad initial guess");
  const double tol = opt.tol_factor * std::max(1.0, norm(p.f, Norm::L2));
  Field u = guess;
  double res = norm(steady_residual(u, p), Norm::L2);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res <= tol) return {u, res, it};
    const Eigen::VectorXd R = pack(steady_residual(u, p));
    const Eigen::VectorXd dx = jacobian(u, p).partialPivLu().solve(-R);
    const Eigen::VectorXd x = pack(u);
    double lambda = 1;
    Field trial = unpack(p.grid(), x + dx);
    double trial_res = norm(steady_residual(trial, p), Norm::L2);
    while (!(trial_res <= (1 - 1e-4 * lambda) * res) && lambda > 1e-6) {
      lambda *= 0.5;
      trial = unpack(p.grid(), x + lambda * dx);
      trial_res = norm(steady_residual(trial, p), Norm::L2);
    }
    if (!std::isfinite(trial_res)) break;
    // Near the roundoff floor a full step may not decrease the residual.
    if (trial_res >= res && res <= 100 * tol) break;
    u = trial;
    res = trial_res;
  }
  if (res <= tol) return {u, res, opt.max_iterations};
  throw ConvergenceFailure("steady-state Newton iteration did not converge", res);
}

SteadyState steady_state_by_continuation(const NlsParams& p, int steps, const SteadyStateOptions& opt) {
  p.validate();
  if (steps < 1) throw InvalidArgument("continuation needs at least one stage");
  NlsParams q = p;
  double s = 0, ds = 1.0 / steps;
  Field u(p.grid());
  int stages = 0;
  for (;;) {
    const double next = std::min(1.0, s + ds);
    q.f = next * p.f;
    try {
      SteadyState r = find_steady_state(q, s == 0 ? linear_response(q) : u, opt);
      if (next == 1.0) return r;
      u = r.u;
      s = next;
    } catch (const ConvergenceFailure&) {
      ds *= 0.5;
    }
    if (++stages > 64 * steps) throw ConvergenceFailure("forcing continuation stalled", s);
  }
}

}  // namespace nlslab
