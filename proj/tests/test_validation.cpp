#include <gtest/gtest.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "cmc/generator.hpp"
#include "cmc/validation.hpp"
#include "support/catalog.hpp"

using namespace cmc;

namespace {

CmcParams params(double C, int h = 1, int eta = 1) {
  CmcParams p;
  p.C = C;
  p.h_sign = h;
  p.eta = eta;
  return p;
}

GeneratingCurve wavy(double phi_scale = 1.0) {
  CmcParams p = params(0.5);
  p.phi_scale = phi_scale;
  return generate_elliptic(ProfileFunction::from_text("2+sin(u)"), p, {0, 3});
}

}  // namespace

TEST(RelativeDifference, Definition) {
  EXPECT_DOUBLE_EQ(relative_difference(1.5, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(relative_difference(0.2, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(relative_difference(Vec4{0, 0, 0, 30}, Vec4{0, 0, 0, 20}), 0.5);
}

TEST(DefaultGrid, ShrinksByFdSteps) {
  const GeneratingCurve c = fixtures::elliptic_catalog()[1].curve();
  const GridSpec g = default_grid(c, 1e-3, 5, 7);
  EXPECT_DOUBLE_EQ(g.u.lo, 0.004);
  EXPECT_DOUBLE_EQ(g.u.hi, 6.0 - 0.004);
  EXPECT_EQ(g.size(), 35u);
  EXPECT_EQ(g.v_at(6), 2 * std::numbers::pi);
}

TEST(CheckCmc, CircleAndNegativeControl) {
  const GeneratingCurve circle2 = fixtures::elliptic_catalog()[1].curve();
  const CmcCheck ok = check_cmc(build_surface(circle2), 3.0 / 16.0, default_grid(circle2, 1e-4, 9, 9));
  EXPECT_LE(ok.max_residual, 1e-12);
  EXPECT_LE(ok.max_residual_fd, 1e-6);
  EXPECT_TRUE(ok.flagged.empty());

  const GeneratingCurve bad = wavy(1.01);
  const CmcCheck no = check_cmc(build_surface(bad), 0.25, default_grid(bad, 1e-4, 9, 9));
  EXPECT_GT(no.max_residual, 100 * 1e-6);
  EXPECT_GT(no.max_residual_fd, 1e-4);
}

TEST(CheckArclength, Defect) {
  const auto c = analytic_curve(RotationType::Elliptic, {"2*u", "0", "1"}, {}, {0, 1});
  EXPECT_DOUBLE_EQ(check_arclength(c, 16), 3.0);
  EXPECT_LE(check_arclength(fixtures::parabolic_catalog()[0].curve()), 1e-12);
}

TEST(CheckFrames, ClosedAndNumeric) {
  for (const auto& cc : fixtures::full_catalog()) {
    const GeneratingCurve c = cc.curve();
    const GridSpec g = default_grid(c, 1e-4, 7, 7);
    if (auto closed = closed_frames(c)) {
      EXPECT_LE(check_frames(*closed, g), 1e-12) << cc.name;
    }
    EXPECT_LE(check_frames(numeric_frames(build_surface(c)), g), 1e-10) << cc.name;
    EXPECT_LE(check_sigma_xy(c, build_surface(c), g), 1e-9) << cc.name;
  }
}

TEST(Validate, GeneratedCurvePasses) {
  const GeneratingCurve c = wavy();
  const ValidationReport rep = validate(c, 0.25, default_grid(c, 1e-4, 11, 11));
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.has_closed_frame);
  EXPECT_FALSE(rep.degenerate);
}

TEST(Validate, NegativeControlFails) {
  const GeneratingCurve c = wavy(1.01);
  const ValidationReport rep = validate(c, 0.25, default_grid(c, 1e-4, 11, 11));
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.cmc_passed());
  EXPECT_GT(*rep.max_cmc_residual, 100 * rep.tolerances.cmc_tol);
}

TEST(Validate, WithoutTargetSkipsCmc) {
  const GeneratingCurve c = fixtures::parabolic_catalog()[2].curve();
  const ValidationReport rep = validate(c, std::nullopt, default_grid(c, 1e-4, 9, 9));
  EXPECT_FALSE(rep.max_cmc_residual.has_value());
  EXPECT_TRUE(rep.passed());
}

TEST(ReportJson, KeyOrder) {
  const GeneratingCurve c = wavy();
  const auto j = to_json(validate(c, 0.25, default_grid(c, 1e-4, 5, 5), {}, "wavy"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{
      "surface_id", "type", "grid", "target_h2", "max_cmc_residual", "max_cmc_residual_fd",
      "max_arclength_residual", "max_frame_residual", "max_numeric_frame_residual",
      "max_closed_vs_oracle", "max_closed_vs_oracle_fd", "max_sigma_xy", "closed_frame",
      "degenerate", "flagged_points", "tolerances", "passed"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["surface_id"], "wavy");
  EXPECT_EQ(j["passed"], true);
}

TEST(ReportJson, ReproducibleAcrossThreadCounts) {
  const GeneratingCurve c = wavy();
  const GridSpec g = default_grid(c, 1e-4, 13, 13);
  ::setenv("CMC_THREADS", "1", 1);
  const std::string one = to_json(validate(c, 0.25, g)).dump();
  ::setenv("CMC_THREADS", "5", 1);
  const std::string five = to_json(validate(c, 0.25, g)).dump();
  const std::string again = to_json(validate(wavy(), 0.25, g)).dump();
  ::unsetenv("CMC_THREADS");
  EXPECT_EQ(one, five);
  EXPECT_EQ(one, again);
}

TEST(SpecialCase, Verdicts) {
  const auto ell = compare_special_case(RotationType::Elliptic, {1, 0}, params(0.5), {0.2, 1.8});
  EXPECT_EQ(ell.verdict, SpecialVerdict::Consistent);
  EXPECT_LE(ell.max_profile_identity_residual, 1e-12);

  const auto hyp_a = compare_special_case(RotationType::HyperbolicA, {2, 1}, params(0.5), {0.5, 2});
  EXPECT_EQ(hyp_a.type, RotationType::HyperbolicA);
  EXPECT_EQ(hyp_a.verdict, SpecialVerdict::Consistent);

  const auto hyp_b = compare_special_case(RotationType::HyperbolicB, {1, 2}, params(0.5, -1), {0, 2});
  EXPECT_EQ(hyp_b.type, RotationType::HyperbolicB);
  EXPECT_EQ(hyp_b.verdict, SpecialVerdict::ProbableMisprint);

  SpecialConstants k{1, 0};
  const auto par = compare_special_case(RotationType::Parabolic, k, params(0.5), {0.5, 2});
  EXPECT_EQ(par.verdict, SpecialVerdict::Consistent);
  k.B = 2;
  const auto par2 = compare_special_case(RotationType::Parabolic, k, params(0.5), {0.5, 2});
  EXPECT_EQ(par2.verdict, SpecialVerdict::ProbableMisprint);
  EXPECT_EQ(to_json(par2)["verdict"], "probable-misprint");
}
