#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nlslab/nls_dynamics.hpp"
#include "nlslab/spectral_field.hpp"
#include "nlslab/trajectory.hpp"

namespace testing_support {

using nlslab::cplx;
using nlslab::Field;
using nlslab::SpectralGrid;

// Generator for property tests: Gaussian coefficients with algebraic decay,
// scaled to a random amplitude in [lo, hi]. Independent of random_field.
struct FieldGen {
  std::mt19937_64 rng;
  double lo = 0.1, hi = 2.0;

  explicit FieldGen(std::uint64_t seed, double lo_ = 0.1, double hi_ = 2.0) : rng(seed), lo(lo_), hi(hi_) {}

  Field operator()(const SpectralGrid& g, int band = -1) {
    std::normal_distribution<double> N;
    std::uniform_real_distribution<double> U(lo, hi);
    const int b = band < 0 ? g.n : band;
    Field u(g);
    for (int k = -b; k <= b; ++k) u[k] = cplx(N(rng), N(rng)) / (1.0 + k * k);
    double s = 0;
    for (int k = -g.n; k <= g.n; ++k) s += std::norm(u[k]);
    s = std::sqrt(s * g.L);
    return (s > 0 ? U(rng) / s : 0.0) * u;
  }

  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
  double real(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
};

// Point values by direct summation of the Fourier series (no FFT).
inline std::vector<cplx> direct_values(const Field& u, int points) {
  const double L = u.grid().L;
  std::vector<cplx> out(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const double x = L * j / points;
    cplx s = 0;
    for (int k = -u.n(); k <= u.n(); ++k) s += u[k] * std::polar(1.0, 2 * nlslab::pi * k * x / L);
    out[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

// int_0^L g(x) dx for a trigonometric polynomial of degree < points, by the
// trapezoidal rule on `points` nodes.
template <class Fn>
double dense_integral(double L, int points, Fn&& g) {
  double s = 0;
  for (int j = 0; j < points; ++j) s += g(j);
  return s * L / points;
}

inline Field three_mode_forcing(const SpectralGrid& g) {
  Field f(g);
  f[-1] = f[0] = f[1] = 1 / std::sqrt(3.0);
  return f;
}

// Unit L2-norm version of the three-mode forcing.
inline Field gentle_forcing(const SpectralGrid& g) {
  Field f = three_mode_forcing(g);
  return (1.0 / nlslab::norm(f, nlslab::Norm::L2)) * f;
}

inline double sup_distance(const nlslab::Trajectory& a, const nlslab::Trajectory& b, nlslab::Norm kind) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, nlslab::norm(a.field(i) - b.field(i), kind));
  return d;
}

}  // namespace testing_support
