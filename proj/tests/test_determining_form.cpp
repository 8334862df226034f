#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "nlslab/determining_form.hpp"
#include "nlslab/errors.hpp"
#include "support.hpp"

using namespace nlslab;

namespace {

struct Rig {
  SpectralGrid g = SpectralGrid::make(2 * pi, 8);
  NlsParams p0{0.5, testing_support::three_mode_forcing(g), 0, 4, false};
  NlsParams p = [this] {
    NlsParams q = p0;
    q.mu = 10;
    return q;
  }();
  SteadyState ss = steady_state_by_continuation(p0);
  Field target = project_low(ss.u, p.m);
  FormConfig fc = [] {
    FormConfig c;
    c.wmap.spinup_k = 30;
    c.wmap.scheme = {5e-3, Scheme::rk4_galerkin, 1};
    c.dt_form = 1e12;
    return c;
  }();

  Trajectory window(const Field& v0) const { return Trajectory::constant(v0, 0, 0.05, 11, p.m); }
};

}  // namespace

TEST(FormField, VanishesAtTheTarget) {
  const Rig s;
  const FormTangent F = vector_field_F({s.window(s.target), s.ss.u, 0, 0, 0}, s.p, s.fc.wmap);
  for (const auto& f : F.F.fields()) EXPECT_TRUE(f.is_zero());
  for (const auto& d : F.F.derivs()) EXPECT_TRUE(d.is_zero());
}

TEST(FormField, AntiparallelToTheOffset) {
  const Rig s;
  const Trajectory v = s.window(s.target + Field::mode(s.g, 2, 0.1));
  const FormTangent F = vector_field_F({v, s.ss.u, 0, 0, 0}, s.p, s.fc.wmap);
  EXPECT_DOUBLE_EQ(F.residual, steady_state_residual(v, s.p, s.fc.wmap));
  EXPECT_GT(F.residual, 0);
  const double r2 = F.residual * F.residual;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Field offset = v.field(i) - s.target;
    EXPECT_LT(norm(F.F.field(i) + r2 * offset, Norm::L2), 1e-15 * norm(offset, Norm::L2));
  }
}

TEST(FormField, RejectsFullModeStates) {
  const Rig s;
  const Trajectory v = Trajectory::constant(s.ss.u, 0, 0.05, 11);
  EXPECT_THROW(vector_field_F({v, s.ss.u, 0, 0, 0}, s.p, s.fc.wmap), InvalidArgument);
}

TEST(SteadyResidual, DetectsANonSteadyState) {
  const Rig s;
  EXPECT_LT(steady_state_residual(s.window(s.target), s.p, s.fc.wmap), 1e-8);
  EXPECT_GT(steady_state_residual(s.window(2.0 * s.target), s.p, s.fc.wmap), 10 * s.fc.tol);
}

TEST(Evolve, StartingAtTheTargetNeedsNoSteps) {
  const Rig s;
  const FormEvolution e = evolve_form({s.window(s.target), s.ss.u, 0, 0, 0}, 10, s.p, s.fc);
  EXPECT_TRUE(e.converged);
  ASSERT_EQ(e.records.size(), 1u);
  EXPECT_EQ(e.records[0].dist_X, 0);
  EXPECT_EQ(e.records[0].lambda, 1);
}

TEST(Evolve, ConvergesAlongTheStraightLine) {
  const Rig s;
  const FormEvolution e = evolve_form({s.window(s.target + Field::mode(s.g, 1, 0.2)), s.ss.u, 0, 0, 0}, 300, s.p, s.fc);
  EXPECT_TRUE(e.converged);
  EXPECT_TRUE(e.monotone);
  EXPECT_LT(e.max_collinearity_defect, 1e-10);
  EXPECT_LT(e.records.back().residual, s.fc.tol);
  for (std::size_t i = 1; i < e.records.size(); ++i) {
    EXPECT_GT(e.records[i].t, e.records[i - 1].t);
    EXPECT_LE(e.records[i].lambda, e.records[i - 1].lambda);
  }
}

TEST(Evolve, ValidatesStepControl) {
  Rig s;
  s.fc.max_gain = 1.5;
  EXPECT_THROW(evolve_form({s.window(s.target), s.ss.u, 0, 0, 0}, 1, s.p, s.fc), InvalidArgument);
}

TEST(FormCsv, HeaderAndRows) {
  const Rig s;
  const FormEvolution e = evolve_form({s.window(s.target + Field::mode(s.g, 1, 0.2)), s.ss.u, 0, 0, 0}, 3, s.p, s.fc);
  const auto path = std::filesystem::temp_directory_path() / "nlslab_form_test.csv";
  write_form_csv(path.string(), e);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,residual,dist_to_Pmustar_X,lambda\r");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, e.records.size());
  std::filesystem::remove(path);
}
