#include "nlslab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "format.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/field_io.hpp"

namespace nlslab {
namespace {

constexpr double lattice_tol = 1e-9;

bool low_mode_only(const Field& u, int m) {
  for (int k = -u.n(); k <= u.n(); ++k)
    if (std::abs(k) > m && u[k] != cplx{}) return false;
  return true;
}

void require_same_layout(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size() ||
      std::abs(a.s0() - b.s0()) > lattice_tol * a.ds() || std::abs(a.ds() - b.ds()) > lattice_tol * a.ds())
    throw InvalidArgument("trajectories have different sample layouts");
}

}  // namespace

Trajectory::Trajectory(SpectralGrid grid, double s0, double ds, std::vector<Field> fields,
                       std::vector<Field> derivs, std::optional<int> mode_cutoff)
    : grid_(grid), s0_(s0), ds_(ds), fields_(std::move(fields)), derivs_(std::move(derivs)),
      mode_cutoff_(mode_cutoff) {
  if (fields_.size() < 2) throw InvalidArgument("trajectory needs at least two samples");
  if (fields_.size() != derivs_.size()) throw InvalidArgument("fields and derivs differ in length");
  if (!(ds_ > 0) || !std::isfinite(ds_) || !std::isfinite(s0_))
    throw InvalidArgument("trajectory spacing must be positive");
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (!(fields_[i].grid() == grid_) || !(derivs_[i].grid() == grid_))
      throw InvalidArgument("trajectory sample on a foreign grid");
  }
  if (mode_cutoff_) {
    if (*mode_cutoff_ < 0 || *mode_cutoff_ > grid_.n) throw InvalidArgument("mode cutoff outside [0, n]");
    for (std::size_t i = 0; i < fields_.size(); ++i)
      if (!low_mode_only(fields_[i], *mode_cutoff_) || !low_mode_only(derivs_[i], *mode_cutoff_))
        throw InvalidArgument("sample has energy above the mode cutoff");
  }
}

Trajectory Trajectory::constant(const Field& v0, double s0, double ds, std::size_t count,
                                std::optional<int> mode_cutoff) {
  std::vector<Field> f(count, v0), d(count, Field(v0.grid()));
  return Trajectory(v0.grid(), s0, ds, std::move(f), std::move(d), mode_cutoff);
}

bool Trajectory::covers(double ta, double tb) const {
  const double eps = lattice_tol * ds_;
  return ta >= s0_ - eps && tb <= end_time() + eps;
}

std::optional<std::size_t> Trajectory::index_of(double t) const {
  const double x = (t - s0_) / ds_;
  const double r = std::round(x);
  if (std::abs(x - r) > lattice_tol || r < 0 || r > static_cast<double>(size() - 1)) return std::nullopt;
  return static_cast<std::size_t>(r);
}

std::pair<std::size_t, double> Trajectory::locate(double t) const {
  if (!covers(t, t)) throw InvalidArgument("time " + std::to_string(t) + " outside the trajectory window");
  const double x = std::clamp((t - s0_) / ds_, 0.0, static_cast<double>(size() - 1));
  auto i = static_cast<std::size_t>(std::floor(x));
  if (i >= size() - 1) i = size() - 2;
  double theta = x - static_cast<double>(i);
  // Snap to lattice points so exact sample times return stored samples.
  if (std::abs(theta) < lattice_tol) theta = 0;
  if (std::abs(theta - 1) < lattice_tol) theta = 1;
  return {i, theta};
}

void Trajectory::at_into(double t, Field& out) const {
  const auto [i, th] = locate(t);
  const int n = grid_.n;
  const int m = mode_cutoff_.value_or(n);
  const Field& p0 = fields_[i];
  const Field& p1 = fields_[i + 1];
  if (th == 0) {
    for (int k = -m; k <= m; ++k) out[k] = p0[k];
    return;
  }
  if (th == 1) {
    for (int k = -m; k <= m; ++k) out[k] = p1[k];
    return;
  }
  const Field& d0 = derivs_[i];
  const Field& d1 = derivs_[i + 1];
  const double t2 = th * th, t3 = t2 * th;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = (t3 - 2 * t2 + th) * ds_;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = (t3 - t2) * ds_;
  for (int k = -m; k <= m; ++k) out[k] = h00 * p0[k] + h10 * d0[k] + h01 * p1[k] + h11 * d1[k];
}

Field Trajectory::at(double t) const {
  Field out(grid_);
  at_into(t, out);
  return out;
}

Field Trajectory::deriv_at(double t) const {
  const auto [i, th] = locate(t);
  if (th == 0) return derivs_[i];
  if (th == 1) return derivs_[i + 1];
  const double t2 = th * th;
  const double g00 = (6 * t2 - 6 * th) / ds_;
  const double g10 = 3 * t2 - 4 * th + 1;
  const double g01 = (-6 * t2 + 6 * th) / ds_;
  const double g11 = 3 * t2 - 2 * th;
  Field out(grid_);
  out.axpy(g00, fields_[i]).axpy(g10, derivs_[i]).axpy(g01, fields_[i + 1]).axpy(g11, derivs_[i + 1]);
  return out;
}

double sup_norm(const Trajectory& v, Norm kind) {
  double s = 0;
  for (const auto& f : v.fields()) s = std::max(s, norm(f, kind));
  return s;
}

double sup_deriv_norm(const Trajectory& v) {
  double s = 0;
  for (const auto& d : v.derivs()) s = std::max(s, norm(d, Norm::L2));
  return s;
}

double norm_X(const Trajectory& v) { return norm_X0(v) + sup_deriv_norm(v); }
double norm_X0(const Trajectory& v) { return sup_norm(v, Norm::L2); }
double norm_Y(const Trajectory& w) { return sup_norm(w, Norm::H2); }

Trajectory project_low_traj(const Trajectory& u, int m) {
  std::vector<Field> f, d;
  f.reserve(u.size());
  d.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    f.push_back(project_low(u.field(i), m));
    d.push_back(project_low(u.deriv(i), m));
  }
  const int cut = u.mode_cutoff() ? std::min(*u.mode_cutoff(), m) : m;
  Trajectory r(u.grid(), u.s0(), u.ds(), std::move(f), std::move(d), cut);
  r.set_pads(u.pad_before(), u.pad_after());
  return r;
}

Trajectory restrict_window(const Trajectory& u, double t_a, double t_b) {
  const double eps = lattice_tol * u.ds();
  std::vector<Field> f, d;
  double first = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.time(i);
    if (t < t_a - eps || t > t_b + eps) continue;
    if (f.empty()) first = t;
    f.push_back(u.field(i));
    d.push_back(u.deriv(i));
  }
  if (f.size() < 2) throw InvalidArgument("restricted window holds fewer than two samples");
  const double last = first + static_cast<double>(f.size() - 1) * u.ds();
  Trajectory r(u.grid(), first, u.ds(), std::move(f), std::move(d), u.mode_cutoff());
  const double pre = std::max(0.0, u.pad_before() - (first - u.s0()));
  const double post = std::max(0.0, u.pad_after() - (u.end_time() - last));
  r.set_pads(pre, post);
  return r;
}

Trajectory extend_constant(const Trajectory& u, double pre_pad, double post_pad) {
  if (pre_pad < 0 || post_pad < 0) throw InvalidArgument("negative pad length");
  const auto pre = static_cast<std::size_t>(std::ceil(pre_pad / u.ds() - lattice_tol));
  const auto post = static_cast<std::size_t>(std::ceil(post_pad / u.ds() - lattice_tol));
  const Field zero(u.grid());
  std::vector<Field> f, d;
  f.reserve(pre + u.size() + post);
  d.reserve(pre + u.size() + post);
  for (std::size_t i = 0; i < pre; ++i) {
    f.push_back(u.field(0));
    d.push_back(zero);
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    f.push_back(u.field(i));
    d.push_back(u.deriv(i));
  }
  for (std::size_t i = 0; i < post; ++i) {
    f.push_back(u.field(u.size() - 1));
    d.push_back(zero);
  }
  const double s0 = u.s0() - static_cast<double>(pre) * u.ds();
  Trajectory r(u.grid(), s0, u.ds(), std::move(f), std::move(d), u.mode_cutoff());
  r.set_pads(u.pad_before() + static_cast<double>(pre) * u.ds(), u.pad_after() + static_cast<double>(post) * u.ds());
  return r;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  require_same_layout(a, b);
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    f.push_back(a.field(i) - b.field(i));
    d.push_back(a.deriv(i) - b.deriv(i));
  }
  std::optional<int> cut;
  if (a.mode_cutoff() && b.mode_cutoff()) cut = std::max(*a.mode_cutoff(), *b.mode_cutoff());
  return Trajectory(a.grid(), a.s0(), a.ds(), std::move(f), std::move(d), cut);
}

Trajectory sum(const Trajectory& a, const Trajectory& b) {
  require_same_layout(a, b);
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    f.push_back(a.field(i) + b.field(i));
    d.push_back(a.deriv(i) + b.deriv(i));
  }
  std::optional<int> cut;
  if (a.mode_cutoff() && b.mode_cutoff()) cut = std::max(*a.mode_cutoff(), *b.mode_cutoff());
  return Trajectory(a.grid(), a.s0(), a.ds(), std::move(f), std::move(d), cut);
}

Trajectory scaled(const Trajectory& a, cplx s) {
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    f.push_back(s * a.field(i));
    d.push_back(s * a.deriv(i));
  }
  return Trajectory(a.grid(), a.s0(), a.ds(), std::move(f), std::move(d), a.mode_cutoff());
}

Trajectory subsample(const Trajectory& a, std::size_t stride) {
  if (stride == 0) throw InvalidArgument("zero stride");
  std::vector<Field> f, d;
  for (std::size_t i = 0; i < a.size(); i += stride) {
    f.push_back(a.field(i));
    d.push_back(a.deriv(i));
  }
  Trajectory r(a.grid(), a.s0(), a.ds() * static_cast<double>(stride), std::move(f), std::move(d), a.mode_cutoff());
  r.set_pads(a.pad_before(), a.pad_after());
  return r;
}

DerivativeConsistency check_derivative_consistency(const Trajectory& u) {
  DerivativeConsistency r;
  if (u.size() < 5) return r;
  const double h = u.ds();
  // The tolerance comes from the fields alone so that a bad derivative
  // cannot widen it.
  double third = 0;
  for (std::size_t i = 2; i + 2 < u.size(); ++i) {
    Field d3 = u.field(i + 2) - 2.0 * u.field(i + 1) + 2.0 * u.field(i - 1) - u.field(i - 2);
    third = std::max(third, norm(d3, Norm::L2) / (2 * h * h * h));
  }
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    Field fd = u.field(i + 1) - u.field(i - 1);
    fd *= 1.0 / (2 * h);
    r.defect = std::max(r.defect, norm(fd - u.deriv(i), Norm::L2));
  }
  r.tolerance = 10 * h * h * third / 6;
  // Roundoff floor of the centered difference itself.
  r.tolerance += 1e-12 * sup_norm(u, Norm::L2) / h;
  r.ok = r.defect <= r.tolerance;
  return r;
}

void write_trajectory_csv(const std::string& path, const Trajectory& u, const std::vector<FunctionalColumn>& extra) {
  for (const auto& c : extra)
    if (c.values.size() != u.size()) throw InvalidArgument("functional column " + c.name + " has wrong length");
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << "s,norm_L2,norm_H1,norm_H2,norm_ds";
  for (const auto& c : extra) out << ',' << c.name;
  out << "\r\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Field& f = u.field(i);
    out << detail::fmt17(u.time(i)) << ',' << detail::fmt17(norm(f, Norm::L2)) << ','
        << detail::fmt17(norm(f, Norm::H1)) << ',' << detail::fmt17(norm(f, Norm::H2)) << ','
        << detail::fmt17(norm(u.deriv(i), Norm::L2));
    for (const auto& c : extra) out << ',' << detail::fmt17(c.values[i]);
    out << "\r\n";
  }
}

void write_trajectory_manifest(const std::string& path, const Trajectory& u) {
  nlohmann::json j = {
      {"s0", u.s0()},
      {"ds", u.ds()},
      {"count", u.size()},
      {"mode_cutoff", u.mode_cutoff() ? nlohmann::json(*u.mode_cutoff()) : nlohmann::json(nullptr)},
      {"grid", {{"L", u.grid().L}, {"n", u.grid().n}, {"n_phys", u.grid().n_phys}}},
      {"pad_before", u.pad_before()},
      {"pad_after", u.pad_after()},
  };
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_trajectory_snapshots(const std::string& path, const Trajectory& u, std::size_t stride) {
  if (stride == 0) throw InvalidArgument("zero stride");
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < u.size(); i += stride)
    arr.push_back({{"s", u.time(i)}, {"field", nlohmann::json::parse(field_to_json(u.field(i)))}});
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << arr.dump() << '\n';
}

}  // namespace nlslab
