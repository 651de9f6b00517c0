#include <gtest/gtest.h>

#include <cmath>

#include "cmc/errors.hpp"
#include "cmc/rotational.hpp"
#include "cmc/surface.hpp"
#include "support/catalog.hpp"

using namespace cmc;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

double coefficient(const Vec4& w, const Vec4& b) { return inner(w, b) / inner(b, b); }

}  // namespace

TEST(BuildElliptic, SectionAndPartials) {
  const GeneratingCurve c = fixtures::elliptic_catalog()[0].curve();
  const SurfacePatch p = build_elliptic(c);
  const CurveJets j = c(0.7);
  EXPECT_EQ(p.position(0.7, 0.0), (Vec4{j[0].val, j[1].val, j[2].val, 0.0}));
  EXPECT_NEAR(norm_inf(p.eval(0.7, 0.0).zv - Vec4{0, 0, 0, 1}), 0.0, 1e-15);
  const auto I = first_fundamental_form(p, 0.7, 2.0);
  EXPECT_NEAR(I.E, 1.0, 1e-15);
  EXPECT_NEAR(I.G, -1.0, 1e-15);
}

TEST(BuildElliptic, RejectsBadCurves) {
  const auto not_unit = analytic_curve(RotationType::Elliptic, {"2*u", "0", "1"}, {}, {0, 1});
  EXPECT_EQ(code_of([&] { build_elliptic(not_unit); }), ErrorCode::InvariantViolation);
  const auto negative = analytic_curve(RotationType::Elliptic, {"cos(u)", "sin(u)", "-1"}, {}, {0, 1});
  EXPECT_EQ(code_of([&] { build_elliptic(negative); }), ErrorCode::InvariantViolation);
}

TEST(BuildHyperbolic, SectionAndMetric) {
  for (const auto& cc : fixtures::hyperbolic_catalog()) {
    const GeneratingCurve c = cc.curve();
    const SurfacePatch p = build_hyperbolic(c);
    const double u = cc.domain.mid();
    const CurveJets j = c(u);
    EXPECT_EQ(p.position(u, 0.0), (Vec4{j[0].val, j[1].val, 0.0, j[2].val})) << cc.name;
    for (double v : {-2.0, 0.0, 1.5})
      EXPECT_NEAR(inner(p.eval(u, v).zv, p.eval(u, v).zv), -j[0].val * j[0].val, 1e-12) << cc.name;
  }
}

TEST(BuildHyperbolic, SlopeChecks) {
  const auto null_slope = analytic_curve(RotationType::HyperbolicA, {"u", "0", "0"}, {}, {1, 2});
  EXPECT_EQ(code_of([&] { build_hyperbolic(null_slope); }), ErrorCode::NearNullSlope);
  auto as_a = fixtures::hyperbolic_catalog()[3];
  as_a.type = RotationType::HyperbolicA;
  EXPECT_EQ(code_of([&] { build_hyperbolic(as_a.curve()); }), ErrorCode::CaseMismatch);
}

TEST(BuildParabolic, SectionAndMetric) {
  for (const auto& cc : fixtures::parabolic_catalog()) {
    const GeneratingCurve c = cc.curve();
    const SurfacePatch p = build_parabolic(c);
    const double u = cc.domain.mid();
    const CurveJets j = c(u);
    const Vec4 curve_point = j[0].val * basis::e1 + j[1].val * basis::xi1 + j[2].val * basis::xi2;
    EXPECT_LE(norm_inf(p.position(u, 0.0) - curve_point), 1e-14) << cc.name;
    for (double v : {-2.0, 0.0, 1.5}) {
      const PatchJet pj = p.eval(u, v);
      const auto I = first_fundamental_form(pj);
      EXPECT_NEAR(I.G, -2.0 * j[1].val * j[1].val, 1e-12 * (1 + std::abs(I.G))) << cc.name;
      EXPECT_NEAR(I.E, 1.0, 1e-12) << cc.name;
      EXPECT_NEAR(I.F, 0.0, 1e-12) << cc.name;
      EXPECT_EQ(causal_character(pj.zu), CausalClass::Spacelike);
      EXPECT_EQ(causal_character(pj.zv), CausalClass::Timelike);
    }
  }
}

TEST(BuildParabolic, RejectsZeroDerivative) {
  const auto flat = analytic_curve(RotationType::Parabolic, {"u", "1", "0"}, {}, {0, 1});
  EXPECT_EQ(code_of([&] { build_parabolic(flat); }), ErrorCode::InvariantViolation);
}

TEST(ClosedFrames, InnerProductTables) {
  for (const auto& cc : fixtures::full_catalog()) {
    if (cc.type == RotationType::Parabolic) continue;
    const GeneratingCurve c = cc.curve();
    for (double u : {cc.domain.lo, cc.domain.mid(), cc.domain.hi})
      for (double v : {-1.7, 0.0, 2.2}) {
        const Frame f = *closed_frame(c, u, v);
        EXPECT_LE(frame_residual(f), 1e-12) << cc.name;
        if (cc.type == RotationType::Elliptic) {
          EXPECT_EQ(f.eps1, 1);
          EXPECT_EQ(f.eps2, -1);
        } else {
          const double rp = c(u)[0].d1;
          EXPECT_EQ(f.eps1, rp * rp > 1 ? 1 : -1) << cc.name;
          EXPECT_EQ(f.eps2, -f.eps1);
        }
        const PatchJet j = build_surface(c).eval(u, v);
        EXPECT_NEAR(norm_inf(f.X - j.zu), 0.0, 1e-15);
        EXPECT_NEAR(inner(f.n1, j.zu), 0.0, 1e-12);
        EXPECT_NEAR(inner(f.n1, j.zv), 0.0, 1e-12);
      }
  }
}

TEST(ClosedMeanCurvature, MatchesOracleOnCatalogue) {
  for (const auto& cc : fixtures::full_catalog()) {
    const GeneratingCurve c = cc.curve();
    const SurfacePatch p = build_surface(c);
    for (double u : {cc.domain.lo + 0.01, cc.domain.mid(), cc.domain.hi - 0.01})
      for (double v : {-1.0, 0.0, 0.6}) {
        const MeanCurvature oracle = mean_curvature(p, u, v);
        EXPECT_NEAR(h2_closed(c, u), oracle.h2, 1e-8) << cc.name;
        if (cc.type == RotationType::Elliptic) {
          EXPECT_LE(norm_inf(elliptic_H_closed(c, u, v).H - oracle.H), 1e-8) << cc.name;
        } else if (is_hyperbolic(cc.type)) {
          EXPECT_LE(norm_inf(hyperbolic_H_closed(c, u, v).H - oracle.H), 1e-8) << cc.name;
        }
      }
  }
}

TEST(ClosedMeanCurvature, EllipticScalarAndVectorForms) {
  const auto circle2 = fixtures::elliptic_catalog()[1].curve();
  EXPECT_NEAR(elliptic_h2_closed(circle2, 1.0), 3.0 / 16.0, 1e-15);
  EXPECT_NEAR(elliptic_H_closed(circle2, 1.0).h2, 3.0 / 16.0, 1e-15);
  EXPECT_NEAR(elliptic_h2_closed(fixtures::elliptic_catalog()[0].curve(), 1.0), 0.0, 1e-15);
}

TEST(ClosedMeanCurvature, HyperbolicWithoutTwistIsAlongN2) {
  const auto c = analytic_curve(RotationType::HyperbolicB, {"1+u/2", "sqrt(0.75)*u", "0"}, {},
                                {0.0, 2.0});
  ASSERT_EQ(hyperplane_indicator(c.type(), c(1.0)), 0.0);
  const Frame f = hyperbolic_frame(c, 1.0, 0.3);
  const MeanCurvature H = hyperbolic_H_closed(c, 1.0, 0.3);
  EXPECT_NEAR(inner(H.H, f.n1), 0.0, 1e-15);
  EXPECT_NEAR(mean_curvature(build_hyperbolic(c), 1.0, 0.3).h2, H.h2, 1e-12);
}

TEST(ClosedMeanCurvature, HyperbolicSignWeightedComponents) {
  for (const auto& cc : fixtures::hyperbolic_catalog()) {
    const GeneratingCurve c = cc.curve();
    const double u = cc.domain.mid();
    const Frame f = hyperbolic_frame(c, u, 0.4);
    const MeanCurvature H = hyperbolic_H_closed(c, u, 0.4);
    const double a = f.eps1 * inner(H.H, f.n1), b = f.eps2 * inner(H.H, f.n2);
    EXPECT_NEAR(H.h2, f.eps1 * a * a + f.eps2 * b * b, 1e-12) << cc.name;
  }
}

TEST(ClosedMeanCurvature, ParabolicDegenerateValue) {
  const auto straight = fixtures::parabolic_catalog()[5].curve();
  for (double u : {0.6, 1.0, 1.9}) EXPECT_NEAR(parabolic_h2_closed(straight, u), -1.0 / (4 * u * u), 1e-14);
}

TEST(Weingarten, TableMatchesDirectionalDifferences) {
  const GeneratingCurve c = fixtures::elliptic_catalog()[4].curve();
  const double h = 1e-5;
  for (double u : {-0.5, 0.3, 1.1})
    for (double v : {0.2, 2.5}) {
      const Frame f = elliptic_frame(c, u, v);
      const WeingartenTable t = elliptic_weingarten(c, u);
      const double r = c(u)[2].val;
      auto du = [&](auto get) {
        return (get(elliptic_frame(c, u + h, v)) - get(elliptic_frame(c, u - h, v))) / (2 * h);
      };
      auto dv = [&](auto get) {
        return (get(elliptic_frame(c, u, v + h)) - get(elliptic_frame(c, u, v - h))) / (2 * h) / r;
      };
      auto n1 = [](const Frame& x) { return x.n1; };
      auto n2 = [](const Frame& x) { return x.n2; };
      const Vec4 measured[4] = {du(n1), dv(n1), du(n2), dv(n2)};
      for (int row = 0; row < 4; ++row) {
        const Vec4 basis_vecs[4] = {f.X, f.Y, f.n1, f.n2};
        for (int col = 0; col < 4; ++col)
          EXPECT_NEAR(coefficient(measured[row], basis_vecs[col]), t.coeff[row][col], 1e-5)
              << "row " << row << " col " << col << " u=" << u;
        EXPECT_LE(norm_inf(measured[row] - t.expand(static_cast<WeingartenTable::Row>(row), f)), 1e-5);
      }
    }
}

TEST(Weingarten, ExplicitEntries) {
  const GeneratingCurve c = fixtures::elliptic_catalog()[3].curve();
  const WeingartenTable t = elliptic_weingarten(c, 1.0);
  for (double x : t.coeff[WeingartenTable::DYn1]) EXPECT_EQ(x, 0.0);
  const double rp = 0.5, r = 2.5;
  EXPECT_NEAR(t.coeff[WeingartenTable::DYn2][1], std::sqrt(1 + rp * rp) / r, 1e-15);
}

TEST(Degeneracy, StraightLinesAndCircles) {
  const auto line = fixtures::elliptic_catalog()[5].curve();
  const auto rep = hyperplane_degeneracy(line);
  EXPECT_TRUE(rep.degenerate);
  EXPECT_GT(rep.min_complement, 0.1);
  const Frame f0 = elliptic_frame(line, 0.1, 0.0);
  for (double u = 0.0; u <= 2.0; u += 0.25)
    for (double v = 0.0; v < 6.3; v += 0.5)
      EXPECT_LE(norm_inf(elliptic_frame(line, u, v).n1 - f0.n1), 1e-8);
  EXPECT_FALSE(hyperplane_degeneracy(fixtures::elliptic_catalog()[1].curve()).degenerate);
  EXPECT_TRUE(hyperplane_degeneracy(fixtures::parabolic_catalog()[5].curve()).degenerate);
  EXPECT_FALSE(hyperplane_degeneracy(fixtures::hyperbolic_catalog()[4].curve()).degenerate);
}
