#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/spectral_field.hpp"

namespace nlslab {

// Uniformly sampled window s0, s0+ds, ... of fields together with their time
// derivatives. Derivatives come from right-hand-side evaluations, never from
// differencing. Pads record how much of the window was added by
// extend_constant, so window sups can be reported with their pad lengths.
class Trajectory {
public:
  Trajectory(SpectralGrid grid, double s0, double ds, std::vector<Field> fields, std::vector<Field> derivs,
             std::optional<int> mode_cutoff = std::nullopt);

  // Constant window v(s) = v0 on [s0, s0 + (count-1) ds] with zero derivatives.
  static Trajectory constant(const Field& v0, double s0, double ds, std::size_t count,
                             std::optional<int> mode_cutoff = std::nullopt);

  const SpectralGrid& grid() const { return grid_; }
  double s0() const { return s0_; }
  double ds() const { return ds_; }
  std::size_t size() const { return fields_.size(); }
  double time(std::size_t i) const { return s0_ + static_cast<double>(i) * ds_; }
  double end_time() const { return time(size() - 1); }
  std::optional<int> mode_cutoff() const { return mode_cutoff_; }

  const Field& field(std::size_t i) const { return fields_[i]; }
  const Field& deriv(std::size_t i) const { return derivs_[i]; }
  const std::vector<Field>& fields() const { return fields_; }
  const std::vector<Field>& derivs() const { return derivs_; }

  double pad_before() const { return pad_before_; }
  double pad_after() const { return pad_after_; }
  void set_pads(double before, double after) { pad_before_ = before, pad_after_ = after; }

  bool covers(double ta, double tb) const;
  // Index of the sample at time t, if t is on the sample lattice.
  std::optional<std::size_t> index_of(double t) const;

  // Cubic Hermite interpolation on the stored values and derivatives.
  Field at(double t) const;
  Field deriv_at(double t) const;
  // Same as at(), writing only modes |k| <= cutoff of out (others untouched).
  void at_into(double t, Field& out) const;

private:
  std::pair<std::size_t, double> locate(double t) const;

  SpectralGrid grid_;
  double s0_;
  double ds_;
  std::vector<Field> fields_;
  std::vector<Field> derivs_;
  std::optional<int> mode_cutoff_;
  double pad_before_ = 0;
  double pad_after_ = 0;
};

// sup ||v|| + sup ||v_s||
double norm_X(const Trajectory& v);
// sup ||v||
double norm_X0(const Trajectory& v);
// sup ||w||_H2
double norm_Y(const Trajectory& w);
// sup of an arbitrary per-sample field norm
double sup_norm(const Trajectory& v, Norm kind);
// sup ||v_s||
double sup_deriv_norm(const Trajectory& v);

Trajectory project_low_traj(const Trajectory& u, int m);
// Samples with t_a <= s <= t_b (lattice tolerance 1e-9 ds).
Trajectory restrict_window(const Trajectory& u, double t_a, double t_b);
// Repeat the boundary fields over the pads with zero derivative.
Trajectory extend_constant(const Trajectory& u, double pre_pad, double post_pad);

// Samplewise a - b and a + b; layouts must match.
Trajectory difference(const Trajectory& a, const Trajectory& b);
Trajectory sum(const Trajectory& a, const Trajectory& b);
Trajectory scaled(const Trajectory& a, cplx s);
// Keep every stride-th sample.
Trajectory subsample(const Trajectory& a, std::size_t stride);

struct DerivativeConsistency {
  double defect = 0;     // max ||centered difference - stored derivative||
  double tolerance = 0;  // 10 ds^2 max ||u'''|| / 6, u''' from third differences of the fields
  bool ok = true;
};
DerivativeConsistency check_derivative_consistency(const Trajectory& u);

struct FunctionalColumn {
  std::string name;
  std::vector<double> values;
};

// Columns s, norm_L2, norm_H1, norm_H2, norm_ds, then the extra columns.
void write_trajectory_csv(const std::string& path, const Trajectory& u,
                          const std::vector<FunctionalColumn>& extra = {});
// {s0, ds, count, mode_cutoff, grid, pad_before, pad_after}
void write_trajectory_manifest(const std::string& path, const Trajectory& u);
// Full-coefficient snapshots every stride samples.
void write_trajectory_snapshots(const std::string& path, const Trajectory& u, std::size_t stride);

}  // namespace nlslab
