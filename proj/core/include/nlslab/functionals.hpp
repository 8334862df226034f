#pragma once

#include <string>
#include <vector>

#include "nlslab/nls_dynamics.hpp"
#include "nlslab/spectral_field.hpp"
#include "nlslab/trajectory.hpp"

namespace nlslab {

// All integrals of products are evaluated on the padded collocation grid,
// which is exact for the quartic integrands used here.

// ||w_x||^2 - 1/2 ||w||_L4^4 + 2 Re int f conj(w) - 2 mu Im int v conj(w)
double phi(const Field& w, const Field& v, const NlsParams& p);

// ||w_xx||^2 - 2 int |w|^2 |w_x|^2 - Re int w^2 conj(w_x)^2
//   - 2 Re int f conj(w_xx) + 2 mu Im int v conj(w_xx)
double varphi(const Field& w, const Field& v, const NlsParams& p);

// ||d_x||^2 - 1/2 int |d|^4 - 2 int Re(w conj(u)) |d|^2 - Re int w u conj(d)^2,
// d = w - u (checked to 1e-12).
double Phi(const Field& delta, const Field& w, const Field& u);

// Phi-form in (w, wt) minus mu Im int eta conj(d), d = w - wt.
double Psi(const Field& delta, const Field& w, const Field& wt, const Field& eta, double mu);

// Right-hand side of d(phi)/ds + 4 gamma phi along the nudged equation.
double phi_balance_rhs(const Field& w, const Field& ws, const Field& v, const Field& vs, const NlsParams& p);

// Right-hand side of 1/2 d(varphi)/ds + gamma varphi.
double varphi_balance_rhs(const Field& w, const Field& ws, const Field& v, const Field& vs, const NlsParams& p);

// Right-hand side of d(Phi)/ds + 2 gamma Phi for w nudged towards P_m u, u a
// solution of the mu = 0 equation.
double Phi_balance_rhs(const Field& w, const Field& ws, const Field& u, const Field& us, const NlsParams& p);

// Right-hand side of d(Psi)/ds + 2 gamma Psi for w = W(v), wt = W(vt),
// eta = v - vt.
double Psi_balance_rhs(const Field& w, const Field& ws, const Field& wt, const Field& wts, const Field& eta,
                       const Field& etas, const NlsParams& p);

struct FunctionalSample {
  double s = 0;
  double value = 0;
  double residual = 0;  // balance defect per unit time over max(1, |value|); 0 at the window ends
};

// Balance-law residuals using centered differences of the sampled functional.
std::vector<FunctionalSample> phi_series(const Trajectory& w, const Trajectory& v, const NlsParams& p);
std::vector<FunctionalSample> varphi_series(const Trajectory& w, const Trajectory& v, const NlsParams& p);
std::vector<FunctionalSample> mass_series(const Trajectory& w, const Trajectory& v, const NlsParams& p);
std::vector<FunctionalSample> Phi_series(const Trajectory& w, const Trajectory& u, const NlsParams& p);
std::vector<FunctionalSample> Psi_series(const Trajectory& w, const Trajectory& wt, const Trajectory& v,
                                         const Trajectory& vt, const NlsParams& p);

// Right-hand side of d||w||^2/ds + 2 gamma ||w||^2 along the nudged equation.
double mass_balance_rhs(const Field& w, const Field& v, const NlsParams& p);

double max_residual(const std::vector<FunctionalSample>& s);

}  // namespace nlslab
