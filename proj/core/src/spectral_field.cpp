#include "nlslab/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "kernels.hpp"
#include "nlslab/errors.hpp"

namespace nlslab {
namespace {

bool smooth_size(int N) {
  for (int p : {2, 3, 5})
    while (N % p == 0) N /= p;
  return N == 1;
}

}  // namespace

SpectralGrid SpectralGrid::make(double L, int n, int n_phys) {
  if (!(L > 0) || !std::isfinite(L)) throw InvalidArgument("grid length must be positive");
  if (n < 1) throw InvalidArgument("grid mode cutoff must be >= 1");
  const int min_phys = 2 * (2 * n + 1);
  if (n_phys == 0) {
    n_phys = min_phys;
    while (!smooth_size(n_phys)) ++n_phys;
  }
  if (n_phys < min_phys)
    throw InvalidArgument("n_phys = " + std::to_string(n_phys) + " below padding minimum " +
                          std::to_string(min_phys));
  return SpectralGrid{L, n, n_phys};
}

Field::Field(const SpectralGrid& grid) : grid_(grid), coeff_(static_cast<std::size_t>(grid.size())) {}

Field::Field(const SpectralGrid& grid, std::vector<cplx> coeff) : grid_(grid), coeff_(std::move(coeff)) {
  if (static_cast<int>(coeff_.size()) != grid.size())
    throw InvalidArgument("coefficient count " + std::to_string(coeff_.size()) + " != 2n+1");
  if (!is_finite()) throw InvalidArgument("non-finite coefficient");
}

Field Field::constant(const SpectralGrid& grid, cplx a) {
  Field u(grid);
  u[0] = a;
  return u;
}

Field Field::mode(const SpectralGrid& grid, int k, cplx a) {
  if (std::abs(k) > grid.n) throw InvalidArgument("mode index outside |k| <= n");
  Field u(grid);
  u[k] = a;
  return u;
}

bool Field::is_finite() const {
  return std::all_of(coeff_.begin(), coeff_.end(),
                     [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

bool Field::is_zero() const {
  return std::all_of(coeff_.begin(), coeff_.end(), [](cplx c) { return c == cplx{}; });
}

void Field::require_same_grid(const Field& o) const {
  if (!(grid_ == o.grid_)) throw InvalidArgument("fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

Field& Field::operator*=(cplx a) {
  for (auto& c : coeff_) c *= a;
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& c : coeff_) c *= a;
  return *this;
}

Field& Field::axpy(cplx a, const Field& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += a * o.coeff_[i];
  return *this;
}

Field project_low(const Field& u, int m) {
  if (m < 0 || m > u.n()) throw InvalidArgument("projection cutoff m outside [0, n]");
  Field r(u.grid());
  for (int k = -m; k <= m; ++k) r[k] = u[k];
  return r;
}

Field project_high(const Field& u, int m) {
  if (m < 0 || m > u.n()) throw InvalidArgument("projection cutoff m outside [0, n]");
  Field r = u;
  for (int k = -m; k <= m; ++k) r[k] = 0.0;
  return r;
}

Field derivative(const Field& u, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  Field r(u.grid());
  const int n = u.n();
  for (int k = -n; k <= n; ++k) {
    const double kk = u.grid().wavenumber(k);
    r[k] = order == 1 ? cplx(0, kk) * u[k] : -kk * kk * u[k];
  }
  return r;
}

double seminorm(const Field& u, int order) {
  double s = 0;
  const int n = u.n();
  for (int k = -n; k <= n; ++k) s += std::pow(u.grid().wavenumber(k), 2 * order) * std::norm(u[k]);
  return std::sqrt(u.grid().L * s);
}

double norm(const Field& u, Norm kind) {
  const auto& g = u.grid();
  switch (kind) {
    case Norm::L2: {
      double s = 0;
      for (cplx c : u.coeffs()) s += std::norm(c);
      return std::sqrt(g.L * s);
    }
    case Norm::H1: return std::hypot(norm(u, Norm::L2), seminorm(u, 1));
    case Norm::H2: return std::hypot(norm(u, Norm::L2), seminorm(u, 2));
    case Norm::L4: {
      const auto x = to_physical(u, g.n_phys);
      double s = 0;
      for (cplx c : x) s += std::norm(c) * std::norm(c);
      return std::pow(g.L * s / g.n_phys, 0.25);
    }
    case Norm::Linf: {
      const auto x = to_physical(u, linf_oversample * g.n_phys);
      double m = 0;
      for (cplx c : x) m = std::max(m, std::abs(c));
      return m;
    }
  }
  return 0;
}

cplx inner(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw InvalidArgument("fields live on different grids");
  cplx s = 0;
  for (int k = -u.n(); k <= u.n(); ++k) s += u[k] * std::conj(v[k]);
  return u.grid().L * s;
}

std::vector<cplx> to_physical(const Field& u, int points) {
  std::vector<cplx> out(static_cast<std::size_t>(points));
  detail::to_physical(u.data(), u.n(), points, out.data());
  return out;
}

Field from_physical(const SpectralGrid& grid, std::span<const cplx> values) {
  Field u(grid);
  detail::from_physical(values.data(), static_cast<int>(values.size()), grid.n, u.data());
  return u;
}

Field cubic(const Field& u) {
  Field r(u.grid());
  detail::cubic(u.data(), u.n(), u.grid().n_phys, r.data());
  return r;
}

double agmon_ratio(const Field& u) {
  const double l2 = norm(u, Norm::L2);
  if (l2 == 0) throw InvalidArgument("agmon ratio of the zero field");
  const double sup = norm(u, Norm::Linf);
  return sup * sup / (l2 * norm(u, Norm::H1));
}

Field random_field(const SpectralGrid& grid, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> gauss;
  Field u(grid);
  for (int k = -grid.n; k <= grid.n; ++k) {
    const double a = std::pow(1.0 + std::abs(k), -decay);
    const double re = gauss(rng);
    const double im = gauss(rng);
    u[k] = a * cplx(re, im);
  }
  const double l2 = norm(u, Norm::L2);
  return l2 > 0 ? (1.0 / l2) * u : u;
}

double calibrate_agmon_constant(const SpectralGrid& grid, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("calibration needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    Field u(grid);
    if (s % 2 == 0) {
      u = random_field(grid, rng, 0.5 + 2.5 * unit(rng));
    } else {
      // Periodized Gaussian bump of width between one grid cell and L/4.
      const double lo = std::log(grid.L / (2.0 * grid.n));
      const double hi = std::log(grid.L / 4.0);
      const double sigma = std::exp(lo + (hi - lo) * unit(rng));
      const double x0 = grid.L * unit(rng);
      const double phase = 2 * pi * unit(rng);
      for (int k = -grid.n; k <= grid.n; ++k) {
        const double kk = grid.wavenumber(k);
        u[k] = std::exp(-0.5 * kk * kk * sigma * sigma) * std::polar(1.0, phase - kk * x0);
      }
    }
    best = std::max(best, agmon_ratio(u));
  }
  return round_up_one_significant(best);
}

double round_up_one_significant(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw InvalidArgument("rounding needs a positive finite value");
  const double scale = std::pow(10.0, std::floor(std::log10(x)));
  double lead = std::ceil(x / scale - 1e-12);
  return lead * scale;
}

}  // namespace nlslab
