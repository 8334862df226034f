#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Periodic interval [0, L) resolved by Fourier modes |k| <= n. Products are
// formed on n_phys collocation points; n_phys >= 2(2n+1) keeps the cubic term
// and all quartic integrals free of aliasing.
struct SpectralGrid {
  double L = 2 * pi;
  int n = 1;
  int n_phys = 6;

  // n_phys = 0 picks the smallest 2^a 3^b 5^c size meeting the padding rule.
  static SpectralGrid make(double L, int n, int n_phys = 0);

  int size() const { return 2 * n + 1; }
  double wavenumber(int k) const { return 2 * pi * k / L; }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;
};

// Coefficients of sum_k u_k exp(i 2 pi k x / L), k = -n..n, stored in
// ascending k. With this convention ||u||^2 = L sum_k |u_k|^2.
class Field {
public:
  Field() = default;
  explicit Field(const SpectralGrid& grid);
  Field(const SpectralGrid& grid, std::vector<cplx> coeff);

  static Field constant(const SpectralGrid& grid, cplx a);
  static Field mode(const SpectralGrid& grid, int k, cplx a);

  const SpectralGrid& grid() const { return grid_; }
  int n() const { return grid_.n; }

  cplx& operator[](int k) { return coeff_[static_cast<std::size_t>(k + grid_.n)]; }
  const cplx& operator[](int k) const { return coeff_[static_cast<std::size_t>(k + grid_.n)]; }

  std::span<cplx> coeffs() { return coeff_; }
  std::span<const cplx> coeffs() const { return coeff_; }
  cplx* data() { return coeff_.data(); }
  const cplx* data() const { return coeff_.data(); }

  bool is_finite() const;
  bool is_zero() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx a);
  Field& operator*=(double a);
  // this += a * o
  Field& axpy(cplx a, const Field& o);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx s, Field a) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }
  friend bool operator==(const Field&, const Field&) = default;

private:
  void require_same_grid(const Field& o) const;

  SpectralGrid grid_{};
  std::vector<cplx> coeff_;
};

enum class Norm { L2, H1, H2, L4, Linf };

// P_m: keep |k| <= m. Q_m = I - P_m.
Field project_low(const Field& u, int m);
Field project_high(const Field& u, int m);

// Multiplier (i 2 pi k / L)^order, order in {1, 2}.
Field derivative(const Field& u, int order);

double norm(const Field& u, Norm kind);
// ||d^order u / dx^order||
double seminorm(const Field& u, int order);

// int_0^L u conj(v) dx
cplx inner(const Field& u, const Field& v);

// P_n(|u|^2 u), alias free.
Field cubic(const Field& u);

// ||u||_inf^2 / (||u|| ||u||_H1) with the sup taken on the oversampled grid.
double agmon_ratio(const Field& u);

// Values at x_j = j L / points, points >= 2n+1.
std::vector<cplx> to_physical(const Field& u, int points);
// Inverse of to_physical for band-limited data; modes beyond n are discarded.
Field from_physical(const SpectralGrid& grid, std::span<const cplx> values);

// Oversampling factor used for the L-infinity norm.
inline constexpr int linf_oversample = 4;

// Random field with spectral decay (1+|k|)^-decay, unit L2 norm.
Field random_field(const SpectralGrid& grid, std::mt19937_64& rng, double decay);

// Max agmon_ratio over a seeded mixture of smooth spectra and localized
// bumps, rounded up to one significant figure.
double calibrate_agmon_constant(const SpectralGrid& grid, int samples, std::uint64_t seed);

double round_up_one_significant(double x);

}  // namespace nlslab
