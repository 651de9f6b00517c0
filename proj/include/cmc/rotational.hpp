#pragma once

// Rotational surfaces of elliptic, hyperbolic and parabolic type, plus their
// closed-form adapted frames and mean curvature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "cmc/curve.hpp"
#include "cmc/errors.hpp"
#include "cmc/geometry.hpp"
#include "cmc/surface.hpp"

namespace cmc {

/// Exclusion band around (r')^2 = 1 for hyperbolic surfaces.
inline constexpr double kSlopeTolerance = 1e-6;
inline constexpr double kArclengthTolerance = 1e-9;
inline constexpr std::size_t kInvariantSamples = 64;

namespace detail {

inline std::string at_u(double u) { return " at u=" + std::to_string(u); }

inline void check_arclength_at(const GeneratingCurve& curve, double u, const CurveJets& c) {
  double scale = 1.0;
  for (const auto& j : c) scale = std::max(scale, j.d1 * j.d1);
  const double defect = arclength_defect(curve.type(), c);
  if (!(std::abs(defect) <= kArclengthTolerance * scale))
    throw Error(ErrorCode::InvariantViolation,
                "generating curve is not parameterised by arc length (defect " +
                    std::to_string(defect) + ")" + at_u(u));
}

inline void check_slope(RotationType type, double u, double rp, double tol) {
  const double excess = rp * rp - 1.0;
  if (std::abs(excess) < tol)
    throw Error(ErrorCode::NearNullSlope, "(r')^2 is within " + std::to_string(tol) +
                                              " of 1" + at_u(u));
  if (type == RotationType::HyperbolicA && excess < 0.0)
    throw Error(ErrorCode::CaseMismatch, "case A needs (r')^2 > 1" + at_u(u));
  if (type == RotationType::HyperbolicB && excess > 0.0)
    throw Error(ErrorCode::CaseMismatch, "case B needs (r')^2 < 1" + at_u(u));
}

template <class Check>
void for_each_sample(const GeneratingCurve& curve, Check&& check) {
  const Interval d = curve.domain();
  if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) return;
  for (std::size_t i = 0; i <= kInvariantSamples; ++i) {
    const double u = i == kInvariantSamples
                         ? d.hi
                         : d.lo + d.length() * static_cast<double>(i) / kInvariantSamples;
    check(u, curve(u));
  }
}

inline PatchDomain patch_domain(const GeneratingCurve& curve) {
  return {curve.domain(), Interval::everything()};
}

// x1 e1 + f xi1 + (-v^2 f + g) xi2 + sqrt(2) v f e4 in the standard basis.
inline Vec4 parabolic_embed(double x1, double f, double g, double v) {
  return x1 * basis::e1 + f * basis::xi1 + (-v * v * f + g) * basis::xi2 +
         std::numbers::sqrt2 * v * f * basis::e4;
}

}  // namespace detail

/// z(u,v) = (x1, x2, r cos v, r sin v).
inline SurfacePatch build_elliptic(const GeneratingCurve& curve) {
  if (curve.type() != RotationType::Elliptic)
    throw Error(ErrorCode::InvariantViolation, "build_elliptic needs an elliptic curve");
  detail::for_each_sample(curve, [&](double u, const CurveJets& c) {
    detail::check_arclength_at(curve, u, c);
    if (!(c[2].val > 0.0)) throw Error(ErrorCode::InvariantViolation, "r <= 0" + detail::at_u(u));
  });
  auto jet = [curve](double u, double v) {
    const CurveJets c = curve(u);
    const Jet2 &x1 = c[0], &x2 = c[1], &r = c[2];
    const double cv = std::cos(v), sv = std::sin(v);
    PatchJet j;
    j.z = {x1.val, x2.val, r.val * cv, r.val * sv};
    j.zu = {x1.d1, x2.d1, r.d1 * cv, r.d1 * sv};
    j.zv = {0.0, 0.0, -r.val * sv, r.val * cv};
    j.zuu = {x1.d2, x2.d2, r.d2 * cv, r.d2 * sv};
    j.zuv = {0.0, 0.0, -r.d1 * sv, r.d1 * cv};
    j.zvv = {0.0, 0.0, -r.val * cv, -r.val * sv};
    return j;
  };
  auto map = [curve](double u, double v) {
    const CurveJets c = curve(u);
    return Vec4{c[0].val, c[1].val, c[2].val * std::cos(v), c[2].val * std::sin(v)};
  };
  return SurfacePatch(jet, map, detail::patch_domain(curve));
}

/// z(u,v) = (r cosh v, x2, r sinh v, x4).
inline SurfacePatch build_hyperbolic(const GeneratingCurve& curve,
                                     double slope_tol = kSlopeTolerance) {
  if (!is_hyperbolic(curve.type()))
    throw Error(ErrorCode::InvariantViolation, "build_hyperbolic needs a hyperbolic curve");
  detail::for_each_sample(curve, [&](double u, const CurveJets& c) {
    detail::check_arclength_at(curve, u, c);
    if (!(c[0].val > 0.0)) throw Error(ErrorCode::InvariantViolation, "r <= 0" + detail::at_u(u));
    detail::check_slope(curve.type(), u, c[0].d1, slope_tol);
  });
  auto jet = [curve](double u, double v) {
    const CurveJets c = curve(u);
    const Jet2 &r = c[0], &x2 = c[1], &x4 = c[2];
    const double ch = std::cosh(v), sh = std::sinh(v);
    PatchJet j;
    j.z = {r.val * ch, x2.val, r.val * sh, x4.val};
    j.zu = {r.d1 * ch, x2.d1, r.d1 * sh, x4.d1};
    j.zv = {r.val * sh, 0.0, r.val * ch, 0.0};
    j.zuu = {r.d2 * ch, x2.d2, r.d2 * sh, x4.d2};
    j.zuv = {r.d1 * sh, 0.0, r.d1 * ch, 0.0};
    j.zvv = {r.val * ch, 0.0, r.val * sh, 0.0};
    return j;
  };
  auto map = [curve](double u, double v) {
    const CurveJets c = curve(u);
    return Vec4{c[0].val * std::cosh(v), c[1].val, c[0].val * std::sinh(v), c[2].val};
  };
  return SurfacePatch(jet, map, detail::patch_domain(curve));
}

/// z(u,v) = x1 e1 + f xi1 + (-v^2 f + g) xi2 + sqrt(2) v f e4, stored in the e-basis.
inline SurfacePatch build_parabolic(const GeneratingCurve& curve) {
  if (curve.type() != RotationType::Parabolic)
    throw Error(ErrorCode::InvariantViolation, "build_parabolic needs a parabolic curve");
  detail::for_each_sample(curve, [&](double u, const CurveJets& c) {
    detail::check_arclength_at(curve, u, c);
    if (!(c[1].val * c[1].d1 != 0.0))
      throw Error(ErrorCode::InvariantViolation, "f f' = 0" + detail::at_u(u));
  });
  auto jet = [curve](double u, double v) {
    const CurveJets c = curve(u);
    const Jet2 &x1 = c[0], &f = c[1], &g = c[2];
    const Vec4 dv = -2.0 * v * basis::xi2 + std::numbers::sqrt2 * basis::e4;  // d/dv of the f-part
    PatchJet j;
    j.z = detail::parabolic_embed(x1.val, f.val, g.val, v);
    j.zu = detail::parabolic_embed(x1.d1, f.d1, g.d1, v);
    j.zuu = detail::parabolic_embed(x1.d2, f.d2, g.d2, v);
    j.zv = f.val * dv;
    j.zuv = f.d1 * dv;
    j.zvv = -2.0 * f.val * basis::xi2;
    return j;
  };
  auto map = [curve](double u, double v) {
    const CurveJets c = curve(u);
    return detail::parabolic_embed(c[0].val, c[1].val, c[2].val, v);
  };
  return SurfacePatch(jet, map, detail::patch_domain(curve));
}

inline SurfacePatch build_surface(const GeneratingCurve& curve) {
  switch (curve.type()) {
    case RotationType::Elliptic: return build_elliptic(curve);
    case RotationType::Parabolic: return build_parabolic(curve);
    default: return build_hyperbolic(curve);
  }
}

/// Closed-form frame of an elliptic surface:
///   n1 = (-x2', x1', 0, 0) / s,  n2 = (r'x1', r'x2', s^2 cos v, s^2 sin v) / s,
/// with s = sqrt(1 + (r')^2), X = z_u, Y = z_v / r.
inline Frame elliptic_frame(const GeneratingCurve& curve, double u, double v) {
  const CurveJets c = curve(u);
  const Jet2 &x1 = c[0], &x2 = c[1], &r = c[2];
  const double s = std::sqrt(1.0 + r.d1 * r.d1);
  const double cv = std::cos(v), sv = std::sin(v);
  Frame f;
  f.X = {x1.d1, x2.d1, r.d1 * cv, r.d1 * sv};
  f.Y = {0.0, 0.0, -sv, cv};
  f.n1 = Vec4{-x2.d1, x1.d1, 0.0, 0.0} / s;
  f.n2 = Vec4{r.d1 * x1.d1, r.d1 * x2.d1, s * s * cv, s * s * sv} / s;
  f.eps1 = 1;
  f.eps2 = -1;
  return f;
}

/// Closed-form frame of a hyperbolic surface with eps = sign((r')^2 - 1):
///   n1 = (0, x4', 0, x2') / q,  n2 = ((1 - r'^2) cosh v, -r'x2', (1 - r'^2) sinh v, -r'x4') / q,
/// q = sqrt(eps ((r')^2 - 1)); <n1,n1> = eps, <n2,n2> = -eps.
inline Frame hyperbolic_frame(const GeneratingCurve& curve, double u, double v,
                              double slope_tol = kSlopeTolerance) {
  const CurveJets c = curve(u);
  const Jet2 &r = c[0], &x2 = c[1], &x4 = c[2];
  const double excess = r.d1 * r.d1 - 1.0;
  if (std::abs(excess) < slope_tol)
    throw Error(ErrorCode::NearNullSlope, "(r')^2 too close to 1" + detail::at_u(u));
  const int eps = excess > 0.0 ? 1 : -1;
  const double q = std::sqrt(eps * excess);
  const double ch = std::cosh(v), sh = std::sinh(v);
  Frame f;
  f.X = {r.d1 * ch, x2.d1, r.d1 * sh, x4.d1};
  f.Y = {sh, 0.0, ch, 0.0};
  f.n1 = Vec4{0.0, x4.d1, 0.0, x2.d1} / q;
  f.n2 = Vec4{-excess * ch, -r.d1 * x2.d1, -excess * sh, -r.d1 * x4.d1} / q;
  f.eps1 = eps;
  f.eps2 = -eps;
  return f;
}

/// Closed-form frame where one exists (not for the parabolic family).
inline std::optional<Frame> closed_frame(const GeneratingCurve& curve, double u, double v) {
  switch (curve.type()) {
    case RotationType::Elliptic: return elliptic_frame(curve, u, v);
    case RotationType::Parabolic: return std::nullopt;
    default: return hyperbolic_frame(curve, u, v);
  }
}

/// H = (r K n1 + (r r'' + r'^2 + 1) n2) / (2 r s), K = x1'x2'' - x1''x2'.
inline MeanCurvature elliptic_H_closed(const GeneratingCurve& curve, double u, double v = 0.0) {
  const CurveJets c = curve(u);
  const Jet2& r = c[2];
  const double s = std::sqrt(1.0 + r.d1 * r.d1);
  const double K = hyperplane_indicator(RotationType::Elliptic, c);
  const double Q = r.val * r.d2 + r.d1 * r.d1 + 1.0;
  const Frame f = elliptic_frame(curve, u, v);
  const Vec4 H = (r.val * K * f.n1 + Q * f.n2) / (2.0 * r.val * s);
  return {H, inner(H, H)};
}

/// <H,H> = (r^2 K^2 - (r r'' + r'^2 + 1)^2) / (4 r^2 (1 + r'^2)).
inline double elliptic_h2_closed(const GeneratingCurve& curve, double u) {
  const CurveJets c = curve(u);
  const Jet2& r = c[2];
  const double K = hyperplane_indicator(RotationType::Elliptic, c);
  const double Q = r.val * r.d2 + r.d1 * r.d1 + 1.0;
  return (r.val * r.val * K * K - Q * Q) / (4.0 * r.val * r.val * (1.0 + r.d1 * r.d1));
}

/// H = eps / (2 r q) (r (x4'x2'' - x4''x2') n1 - (r r'' + r'^2 - 1) n2), q = sqrt(eps (r'^2 - 1)).
inline MeanCurvature hyperbolic_H_closed(const GeneratingCurve& curve, double u, double v = 0.0,
                                         double slope_tol = kSlopeTolerance) {
  const CurveJets c = curve(u);
  const Jet2 &r = c[0], &x2 = c[1], &x4 = c[2];
  const Frame f = hyperbolic_frame(curve, u, v, slope_tol);
  const double eps = f.eps1;
  const double q = std::sqrt(eps * (r.d1 * r.d1 - 1.0));
  const double twist = x4.d1 * x2.d2 - x4.d2 * x2.d1;
  const double Q = r.val * r.d2 + r.d1 * r.d1 - 1.0;
  const Vec4 H = eps / (2.0 * r.val * q) * (r.val * twist * f.n1 - Q * f.n2);
  return {H, inner(H, H)};
}

/// <H,H> = (f^2 (x1''f' - x1'f'')^2 - (f f'' + f'^2)^2) / (4 f^2 f'^2).
inline double parabolic_h2_closed(const GeneratingCurve& curve, double u) {
  const CurveJets c = curve(u);
  const Jet2 &f = c[1];
  const double ff = f.val * f.d1;
  if (ff == 0.0) throw DomainError(u, "f f' = 0 in the parabolic mean curvature");
  const double K = hyperplane_indicator(RotationType::Parabolic, c);
  const double Q = f.val * f.d2 + f.d1 * f.d1;
  return (f.val * f.val * K * K - Q * Q) / (4.0 * ff * ff);
}

/// Closed-form <H,H> for any family.
inline double h2_closed(const GeneratingCurve& curve, double u) {
  switch (curve.type()) {
    case RotationType::Elliptic: return elliptic_h2_closed(curve, u);
    case RotationType::Parabolic: return parabolic_h2_closed(curve, u);
    default: return hyperbolic_H_closed(curve, u).h2;
  }
}

/// Ambient derivatives of the elliptic normal frame, expanded in {X, Y, n1, n2}.
/// Rows: D_X n1, D_Y n1, D_X n2, D_Y n2.
struct WeingartenTable {
  enum Row { DXn1 = 0, DYn1 = 1, DXn2 = 2, DYn2 = 3 };
  std::array<std::array<double, 4>, 4> coeff{};

  Vec4 expand(Row row, const Frame& f) const {
    const auto& c = coeff[row];
    return c[0] * f.X + c[1] * f.Y + c[2] * f.n1 + c[3] * f.n2;
  }
};

inline WeingartenTable elliptic_weingarten(const GeneratingCurve& curve, double u) {
  const CurveJets c = curve(u);
  const Jet2& r = c[2];
  const double s2 = 1.0 + r.d1 * r.d1;
  const double s = std::sqrt(s2);
  const double K = hyperplane_indicator(RotationType::Elliptic, c);
  WeingartenTable t;
  t.coeff[WeingartenTable::DXn1] = {-K / s, 0.0, 0.0, r.d1 * K / s2};
  t.coeff[WeingartenTable::DYn1] = {0.0, 0.0, 0.0, 0.0};
  t.coeff[WeingartenTable::DXn2] = {r.d2 / s, 0.0, r.d1 * K / s2, 0.0};
  t.coeff[WeingartenTable::DYn2] = {0.0, s / r.val, 0.0, 0.0};
  return t;
}

struct DegeneracyReport {
  bool degenerate = false;
  /// max |x1'x2'' - x1''x2'| (or the hyperbolic / parabolic analogue) over the samples.
  double max_indicator = 0.0;
  /// min |r r'' + r'^2 + 1| (resp. |r r'' + r'^2 - 1|, |f f'' + f'^2|); a degenerate
  /// surface with this nonzero lies in a hyperplane rather than being minimal there.
  double min_complement = 0.0;
  std::string description;
};

inline DegeneracyReport hyperplane_degeneracy(const GeneratingCurve& curve,
                                              std::size_t samples = 256, double tol = 1e-10) {
  DegeneracyReport rep;
  rep.min_complement = std::numeric_limits<double>::infinity();
  for (const CurveSample& s : sample_curve(curve, samples)) {
    const CurveJets& c = s.jets;
    rep.max_indicator = std::max(rep.max_indicator, std::abs(hyperplane_indicator(curve.type(), c)));
    double complement = 0.0;
    switch (curve.type()) {
      case RotationType::Elliptic: complement = c[2].val * c[2].d2 + c[2].d1 * c[2].d1 + 1.0; break;
      case RotationType::Parabolic: complement = c[1].val * c[1].d2 + c[1].d1 * c[1].d1; break;
      default: complement = c[0].val * c[0].d2 + c[0].d1 * c[0].d1 - 1.0; break;
    }
    rep.min_complement = std::min(rep.min_complement, std::abs(complement));
  }
  rep.degenerate = rep.max_indicator <= tol;
  if (rep.degenerate) {
    rep.description = curve.type() == RotationType::Elliptic
                          ? "n1 is constant; the surface lies in the hyperplane span{X, Y, n2}"
                          : "the surface lies in a hyperplane";
  } else {
    rep.description = "not contained in a hyperplane";
  }
  return rep;
}

}  // namespace cmc
