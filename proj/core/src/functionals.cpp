#include "nlslab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"
#include "nlslab/errors.hpp"

namespace nlslab {
namespace {

std::vector<cplx> phys(const Field& u) {
  std::vector<cplx> x(static_cast<std::size_t>(u.grid().n_phys));
  detail::to_physical(u.data(), u.n(), u.grid().n_phys, x.data());
  return x;
}

// int_0^L g dx on the collocation grid, g given pointwise by fn(j).
template <class Fn>
double quad(const SpectralGrid& g, Fn&& fn) {
  double s = 0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(g.n_phys); ++j) s += fn(j);
  return s * g.L / g.n_phys;
}

void check_delta(const Field& delta, const Field& a, const Field& b) {
  const double scale = std::max({1.0, norm(a, Norm::L2), norm(b, Norm::L2)});
  if (norm(delta - (a - b), Norm::L2) > 1e-12 * scale) throw InvalidArgument("delta does not match the difference");
}

// ||d_x||^2 - 1/2 int |d|^4 - 2 int Re(a conj(b)) |d|^2 - Re int a b conj(d)^2
double phi_form(const Field& d, const Field& a, const Field& b) {
  const auto D = phys(d), A = phys(a), B = phys(b);
  const double q = quad(d.grid(), [&](std::size_t j) {
    const double dd = std::norm(D[j]);
    const cplx dc = std::conj(D[j]);
    return -0.5 * dd * dd - 2 * (A[j] * std::conj(B[j])).real() * dd - (A[j] * B[j] * dc * dc).real();
  });
  const double dx = seminorm(d, 1);
  return dx * dx + q;
}

// Terms shared by the Phi and Psi balances.
double difference_balance(const Field& w, const Field& ws, const Field& u, const Field& us, const NlsParams& p) {
  const Field d = w - u;
  const Field pd = project_low(d, p.m);
  const auto W = phys(w), Ws = phys(ws), U = phys(u), Us = phys(us), D = phys(d), PD = phys(pd);
  const double q = quad(w.grid(), [&](std::size_t j) {
    const double dd = std::norm(D[j]);
    const cplx dc = std::conj(D[j]), pdc = std::conj(PD[j]);
    const cplx wu_bar = W[j] * std::conj(U[j]);
    const cplx wu_bar_s = Ws[j] * std::conj(U[j]) + W[j] * std::conj(Us[j]);
    const cplx wu_s = Ws[j] * U[j] + W[j] * Us[j];
    return p.gamma * dd * dd + 2 * p.mu * (dd * D[j] * pdc).real() +
           4 * p.mu * wu_bar.real() * (D[j] * pdc).real() + 2 * p.mu * (W[j] * U[j] * dc * pdc).real() -
           2 * wu_bar_s.real() * dd - (wu_s * dc * dc).real();
  });
  const double pdx = seminorm(pd, 1);
  return q - 2 * p.mu * pdx * pdx;
}

void require_same_lattice(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size() || std::abs(a.s0() - b.s0()) > 1e-9 * a.ds() ||
      std::abs(a.ds() - b.ds()) > 1e-12 * a.ds() || !(a.grid() == b.grid()))
    throw InvalidArgument("trajectories are sampled on different lattices");
}

// value_i and rhs_i -> residual of (scale * d/ds + decay) F = rhs.
std::vector<FunctionalSample> residuals(const Trajectory& lattice, const std::vector<double>& value,
                                        const std::vector<double>& rhs, double scale, double decay) {
  const std::size_t n = value.size();
  std::vector<FunctionalSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].s = lattice.time(i);
    out[i].value = value[i];
    if (i == 0 || i + 1 == n) continue;
    const double fd = (value[i + 1] - value[i - 1]) / (2 * lattice.ds());
    out[i].residual = std::abs(scale * fd + decay * value[i] - rhs[i]) / std::max(1.0, std::abs(value[i]));
  }
  return out;
}

}  // namespace

double phi(const Field& w, const Field& v, const NlsParams& p) {
  const double wx = seminorm(w, 1);
  const double l4 = norm(w, Norm::L4);
  return wx * wx - 0.5 * l4 * l4 * l4 * l4 + 2 * inner(p.f, w).real() - 2 * p.mu * inner(v, w).imag();
}

double varphi(const Field& w, const Field& v, const NlsParams& p) {
  const Field wx = derivative(w, 1), wxx = derivative(w, 2);
  const auto W = phys(w), WX = phys(wx);
  const double q = quad(w.grid(), [&](std::size_t j) {
    const cplx wxc = std::conj(WX[j]);
    return -2 * std::norm(W[j]) * std::norm(WX[j]) - (W[j] * W[j] * wxc * wxc).real();
  });
  const double n2 = seminorm(w, 2);
  return n2 * n2 + q - 2 * inner(p.f, wxx).real() + 2 * p.mu * inner(v, wxx).imag();
}

double Phi(const Field& delta, const Field& w, const Field& u) {
  check_delta(delta, w, u);
  return phi_form(delta, w, u);
}

double Psi(const Field& delta, const Field& w, const Field& wt, const Field& eta, double mu) {
  check_delta(delta, w, wt);
  return phi_form(delta, w, wt) - mu * inner(eta, delta).imag();
}

double mass_balance_rhs(const Field& w, const Field& v, const NlsParams& p) {
  const double pw = norm(project_low(w, p.m), Norm::L2);
  return 2 * inner(p.f, w).imag() - 2 * p.mu * pw * pw + 2 * p.mu * inner(v, w).real();
}

double phi_balance_rhs(const Field& w, const Field& ws, const Field& v, const Field& vs, const NlsParams& p) {
  (void)ws;
  const double g = p.gamma, mu = p.mu;
  const Field pw = project_low(w, p.m);
  const double wx = seminorm(w, 1), pwx = seminorm(pw, 1);
  return 2 * g * wx * wx + 6 * g * inner(p.f, w).real() - 6 * mu * g * inner(v, w).imag() +
         2 * mu * inner(project_low(cubic(w), p.m), pw).real() - 2 * mu * pwx * pwx -
         2 * mu * inner(project_low(p.f, p.m), pw).real() + 2 * mu * mu * inner(v, pw).imag() -
         2 * mu * inner(vs, w).imag();
}

double varphi_balance_rhs(const Field& w, const Field& ws, const Field& v, const Field& vs, const NlsParams& p) {
  const double g = p.gamma, mu = p.mu;
  const Field wx = derivative(w, 1), wxx = derivative(w, 2);
  const auto W = phys(w), WS = phys(ws), WX = phys(wx);
  const double q = quad(w.grid(), [&](std::size_t j) {
    const cplx wxc = std::conj(WX[j]);
    return -2 * (std::conj(W[j]) * WS[j]).real() * std::norm(WX[j]) - (W[j] * WS[j] * wxc * wxc).real();
  });
  const Field pwx = project_low(wx, p.m);
  const Field pwxs = project_low(derivative(ws, 1), p.m);
  return q + mu * inner(vs, wxx).imag() + g * mu * inner(v, wxx).imag() - g * inner(p.f, wxx).real() -
         mu * inner(pwx, pwxs).imag();
}

double Phi_balance_rhs(const Field& w, const Field& ws, const Field& u, const Field& us, const NlsParams& p) {
  return difference_balance(w, ws, u, us, p);
}

double Psi_balance_rhs(const Field& w, const Field& ws, const Field& wt, const Field& wts, const Field& eta,
                       const Field& etas, const NlsParams& p) {
  const Field d = w - wt, ds = ws - wts;
  const double mu = p.mu;
  return difference_balance(w, ws, wt, wts, p) + 2 * mu * mu * inner(eta, project_low(d, p.m)).imag() +
         mu * inner(eta, ds).imag() - mu * inner(etas, d).imag();
}

std::vector<FunctionalSample> phi_series(const Trajectory& w, const Trajectory& v, const NlsParams& p) {
  std::vector<double> val(w.size()), rhs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Field vi = v.at(w.time(i)), vsi = v.deriv_at(w.time(i));
    val[i] = phi(w.field(i), vi, p);
    rhs[i] = phi_balance_rhs(w.field(i), w.deriv(i), vi, vsi, p);
  }
  return residuals(w, val, rhs, 1.0, 4 * p.gamma);
}

std::vector<FunctionalSample> varphi_series(const Trajectory& w, const Trajectory& v, const NlsParams& p) {
  std::vector<double> val(w.size()), rhs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Field vi = v.at(w.time(i)), vsi = v.deriv_at(w.time(i));
    val[i] = varphi(w.field(i), vi, p);
    rhs[i] = varphi_balance_rhs(w.field(i), w.deriv(i), vi, vsi, p);
  }
  return residuals(w, val, rhs, 0.5, p.gamma);
}

std::vector<FunctionalSample> mass_series(const Trajectory& w, const Trajectory& v, const NlsParams& p) {
  std::vector<double> val(w.size()), rhs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double nw = norm(w.field(i), Norm::L2);
    val[i] = nw * nw;
    rhs[i] = mass_balance_rhs(w.field(i), v.at(w.time(i)), p);
  }
  return residuals(w, val, rhs, 1.0, 2 * p.gamma);
}

std::vector<FunctionalSample> Phi_series(const Trajectory& w, const Trajectory& u, const NlsParams& p) {
  require_same_lattice(w, u);
  std::vector<double> val(w.size()), rhs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    val[i] = phi_form(w.field(i) - u.field(i), w.field(i), u.field(i));
    rhs[i] = Phi_balance_rhs(w.field(i), w.deriv(i), u.field(i), u.deriv(i), p);
  }
  return residuals(w, val, rhs, 1.0, 2 * p.gamma);
}

std::vector<FunctionalSample> Psi_series(const Trajectory& w, const Trajectory& wt, const Trajectory& v,
                                         const Trajectory& vt, const NlsParams& p) {
  require_same_lattice(w, wt);
  std::vector<double> val(w.size()), rhs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = w.time(i);
    const Field eta = v.at(s) - vt.at(s), etas = v.deriv_at(s) - vt.deriv_at(s);
    const Field& a = w.field(i);
    const Field& b = wt.field(i);
    val[i] = phi_form(a - b, a, b) - p.mu * inner(eta, a - b).imag();
    rhs[i] = Psi_balance_rhs(a, w.deriv(i), b, wt.deriv(i), eta, etas, p);
  }
  return residuals(w, val, rhs, 1.0, 2 * p.gamma);
}

double max_residual(const std::vector<FunctionalSample>& s) {
  double r = 0;
  for (const auto& x : s) r = std::max(r, x.residual);
  return r;
}

}  // namespace nlslab
