#pragma once

// Cross-checks of rotational surfaces: CMC residuals, closed form against the
// numeric oracle, frame tables, arc length, and the special closed forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cmc/curve.hpp"
#include "cmc/errors.hpp"
#include "cmc/generator.hpp"
#include "cmc/geometry.hpp"
#include "cmc/parallel.hpp"
#include "cmc/rotational.hpp"
#include "cmc/surface.hpp"
#include "json.hpp"

namespace cmc {

/// Mixed relative difference |a - b| / max(1, |b|).
inline double relative_difference(double a, double b) noexcept {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline double relative_difference(const Vec4& a, const Vec4& b) noexcept {
  return norm_inf(a - b) / std::max(1.0, norm_inf(b));
}

struct GridSpec {
  std::size_t nu = 41;
  std::size_t nv = 41;
  Interval u{0.0, 1.0};
  Interval v{0.0, 1.0};

  std::size_t size() const noexcept { return nu * nv; }
  double u_at(std::size_t i) const noexcept { return at(u, nu, i); }
  double v_at(std::size_t j) const noexcept { return at(v, nv, j); }

 private:
  static double at(const Interval& iv, std::size_t n, std::size_t i) noexcept {
    if (n <= 1) return iv.mid();
    if (i + 1 == n) return iv.hi;
    return iv.lo + iv.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

/// [0, 2 pi] for elliptic surfaces, [-2, 2] otherwise.
inline Interval default_v_window(RotationType t) noexcept {
  return t == RotationType::Elliptic ? Interval{0.0, 2.0 * std::numbers::pi} : Interval{-2.0, 2.0};
}

/// The curve's domain shrunk by four finite-difference steps per side.
inline GridSpec default_grid(const GeneratingCurve& curve, double fd_step = 1e-4,
                             std::size_t nu = 41, std::size_t nv = 41) {
  GridSpec g;
  g.nu = nu;
  g.nv = nv;
  g.u = curve.domain().shrunk(4.0 * fd_step);
  g.v = default_v_window(curve.type());
  if (!(g.u.length() > 0.0))
    throw Error(ErrorCode::InvariantViolation, "curve domain too short for the validation grid");
  return g;
}

struct ValidationConfig {
  double cmc_tol = 1e-6;
  double cmc_fd_tol = 1e-4;
  double arclength_tol = 1e-9;
  double frame_closed_tol = 1e-12;
  double frame_numeric_tol = 1e-10;
  double closed_vs_oracle_tol = 1e-6;
  double closed_vs_oracle_fd_tol = 1e-4;
  double sigma_xy_tol = 1e-9;
  double fd_step = 1e-4;
  std::size_t arclength_samples = 1024;
};

struct FlaggedPoint {
  double u = 0.0;
  double v = 0.0;
  std::string reason;
};

namespace detail {

struct PointResult {
  double value = 0.0;
  double value_fd = 0.0;
  std::optional<FlaggedPoint> flag;
};

struct GridMax {
  double value = 0.0;
  double value_fd = 0.0;
  std::vector<FlaggedPoint> flagged;
};

template <class Fn>
GridMax grid_reduce(const GridSpec& grid, Fn&& fn) {
  std::vector<PointResult> results(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const double u = grid.u_at(k / grid.nv), v = grid.v_at(k % grid.nv);
    try {
      results[k] = fn(u, v);
    } catch (const Error& e) {
      results[k].flag = FlaggedPoint{u, v, std::string(error_code_name(e.code())) + ": " + e.what()};
    }
  });
  GridMax out;
  for (const auto& r : results) {
    out.value = std::max(out.value, r.value);
    out.value_fd = std::max(out.value_fd, r.value_fd);
    if (r.flag) out.flagged.push_back(*r.flag);
  }
  return out;
}

}  // namespace detail

struct CmcCheck {
  double max_residual = 0.0;     // analytic jets
  double max_residual_fd = 0.0;  // finite differences at fd_step
  std::vector<FlaggedPoint> flagged;
};

/// max |<H,H> - target| over the grid with analytic jets and with the
/// finite-difference oracle. FD values disagreeing with a half-step rerun by
/// more than 10x the FD tolerance are flagged as singular.
inline CmcCheck check_cmc(const SurfacePatch& patch, double target_h2, const GridSpec& grid,
                          const ValidationConfig& cfg = {}) {
  const SurfacePatch fd = fd_patch(patch, cfg.fd_step);
  const SurfacePatch fd_half = fd_patch(patch, 0.5 * cfg.fd_step);
  const auto m = detail::grid_reduce(grid, [&](double u, double v) {
    detail::PointResult r;
    r.value = std::abs(mean_curvature(patch, u, v).h2 - target_h2);
    const double h2_fd = mean_curvature(fd, u, v).h2;
    const double h2_half = mean_curvature(fd_half, u, v).h2;
    if (std::abs(h2_fd - h2_half) > 10.0 * cfg.cmc_fd_tol) {
      r.flag = FlaggedPoint{u, v, "fd-singular: step and half-step results disagree"};
    } else {
      r.value_fd = std::abs(h2_fd - target_h2);
    }
    return r;
  });
  return {m.value, m.value_fd, m.flagged};
}

/// max |type-appropriate arc-length expression - 1| over evenly spaced samples.
inline double check_arclength(const GeneratingCurve& curve, std::size_t samples = 1024) {
  double worst = 0.0;
  for (const CurveSample& s : sample_curve(curve, samples))
    worst = std::max(worst, std::abs(arclength_defect(curve.type(), s.jets)));
  return worst;
}

using FrameFn = std::function<Frame(double u, double v)>;

/// Largest deviation of any frame's inner products from its prescribed table.
inline double check_frames(const FrameFn& frames, const GridSpec& grid) {
  const auto m = detail::grid_reduce(grid, [&](double u, double v) {
    return detail::PointResult{frame_residual(frames(u, v)), 0.0, std::nullopt};
  });
  if (!m.flagged.empty())
    throw Error(ErrorCode::DegenerateFrame, "frame construction failed at (" +
                                                std::to_string(m.flagged.front().u) + ", " +
                                                std::to_string(m.flagged.front().v) + ")");
  return m.value;
}

inline FrameFn numeric_frames(const SurfacePatch& patch) {
  return [patch](double u, double v) { return normal_frame_numeric(patch, u, v); };
}

inline std::optional<FrameFn> closed_frames(const GeneratingCurve& curve) {
  if (curve.type() == RotationType::Parabolic) return std::nullopt;
  return FrameFn([curve](double u, double v) { return *closed_frame(curve, u, v); });
}

struct ClosedVsOracle {
  double max_jet = 0.0;
  double max_fd = 0.0;
  std::vector<FlaggedPoint> flagged;
};

/// Relative disagreement between the closed-form mean curvature and the oracle:
/// <H,H> for every family, and the H vector where a closed form exists.
inline ClosedVsOracle check_closed_vs_oracle(const GeneratingCurve& curve,
                                             const SurfacePatch& patch, const GridSpec& grid,
                                             const ValidationConfig& cfg = {}) {
  const SurfacePatch fd = fd_patch(patch, cfg.fd_step);
  const auto m = detail::grid_reduce(grid, [&](double u, double v) {
    detail::PointResult r;
    const MeanCurvature oracle = mean_curvature(patch, u, v);
    const MeanCurvature oracle_fd = mean_curvature(fd, u, v);
    const double h2 = h2_closed(curve, u);
    r.value = relative_difference(oracle.h2, h2);
    r.value_fd = relative_difference(oracle_fd.h2, h2);
    std::optional<MeanCurvature> closed;
    if (curve.type() == RotationType::Elliptic) closed = elliptic_H_closed(curve, u, v);
    if (is_hyperbolic(curve.type())) closed = hyperbolic_H_closed(curve, u, v);
    if (closed) {
      r.value = std::max(r.value, relative_difference(oracle.H, closed->H));
      r.value_fd = std::max(r.value_fd, relative_difference(oracle_fd.H, closed->H));
    }
    return r;
  });
  return {m.value, m.value_fd, m.flagged};
}

/// max |sigma(X, Y)|_inf over the grid in the closed frame (numeric for parabolic).
inline double check_sigma_xy(const GeneratingCurve& curve, const SurfacePatch& patch,
                             const GridSpec& grid) {
  const auto closed = closed_frames(curve);
  const FrameFn frames = closed ? *closed : numeric_frames(patch);
  const auto m = detail::grid_reduce(grid, [&](double u, double v) {
    const SecondFundamentalForm s = second_fundamental_form(patch, frames(u, v), u, v);
    return detail::PointResult{norm_inf(s.XY), 0.0, std::nullopt};
  });
  if (!m.flagged.empty())
    throw Error(ErrorCode::DegenerateFrame, "second fundamental form failed at a grid point");
  return m.value;
}

struct ValidationReport {
  std::string surface_id;
  RotationType type = RotationType::Elliptic;
  GridSpec grid;
  std::optional<double> target_h2;
  std::optional<double> max_cmc_residual;
  std::optional<double> max_cmc_residual_fd;
  double max_arclength_residual = 0.0;
  /// Closed-form frames where they exist, numeric frames otherwise.
  double max_frame_residual = 0.0;
  double max_numeric_frame_residual = 0.0;
  double max_closed_vs_oracle = 0.0;
  double max_closed_vs_oracle_fd = 0.0;
  double max_sigma_xy = 0.0;
  bool has_closed_frame = false;
  bool degenerate = false;
  std::vector<FlaggedPoint> flagged_points;
  ValidationConfig tolerances;

  bool cmc_passed() const noexcept {
    if (!target_h2) return true;
    return max_cmc_residual && max_cmc_residual_fd && *max_cmc_residual <= tolerances.cmc_tol &&
           *max_cmc_residual_fd <= tolerances.cmc_fd_tol;
  }

  bool passed() const noexcept {
    const double frame_tol =
        has_closed_frame ? tolerances.frame_closed_tol : tolerances.frame_numeric_tol;
    return flagged_points.empty() && cmc_passed() &&
           max_arclength_residual <= tolerances.arclength_tol &&
           max_frame_residual <= frame_tol &&
           max_numeric_frame_residual <= tolerances.frame_numeric_tol &&
           max_closed_vs_oracle <= tolerances.closed_vs_oracle_tol &&
           max_closed_vs_oracle_fd <= tolerances.closed_vs_oracle_fd_tol &&
           max_sigma_xy <= tolerances.sigma_xy_tol;
  }
};

/// Runs every check on the surface generated by `curve`. Without a target the
/// CMC residual fields stay empty and do not affect the verdict.
inline ValidationReport validate(const GeneratingCurve& curve, std::optional<double> target_h2,
                                 const GridSpec& grid, const ValidationConfig& cfg = {},
                                 std::string surface_id = "surface") {
  ValidationReport rep;
  rep.surface_id = std::move(surface_id);
  rep.type = curve.type();
  rep.grid = grid;
  rep.target_h2 = target_h2;
  rep.tolerances = cfg;
  const SurfacePatch patch = build_surface(curve);
  rep.max_arclength_residual = check_arclength(curve, cfg.arclength_samples);
  rep.degenerate = hyperplane_degeneracy(curve).degenerate;

  const auto closed = closed_frames(curve);
  rep.has_closed_frame = closed.has_value();
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      rep.flagged_points.push_back(
          {grid.u.mid(), grid.v.mid(), std::string(error_code_name(e.code())) + ": " + e.what()});
    }
  };
  guarded([&] { rep.max_numeric_frame_residual = check_frames(numeric_frames(patch), grid); });
  guarded([&] {
    rep.max_frame_residual = closed ? check_frames(*closed, grid) : rep.max_numeric_frame_residual;
  });
  guarded([&] { rep.max_sigma_xy = check_sigma_xy(curve, patch, grid); });

  const ClosedVsOracle cvo = check_closed_vs_oracle(curve, patch, grid, cfg);
  rep.max_closed_vs_oracle = cvo.max_jet;
  rep.max_closed_vs_oracle_fd = cvo.max_fd;
  rep.flagged_points.insert(rep.flagged_points.end(), cvo.flagged.begin(), cvo.flagged.end());

  if (target_h2) {
    const CmcCheck cmc = check_cmc(patch, *target_h2, grid, cfg);
    rep.max_cmc_residual = cmc.max_residual;
    rep.max_cmc_residual_fd = cmc.max_residual_fd;
    rep.flagged_points.insert(rep.flagged_points.end(), cmc.flagged.begin(), cmc.flagged.end());
  }
  return rep;
}

enum class SpecialVerdict { Consistent, ProbableMisprint };

constexpr std::string_view to_string(SpecialVerdict v) noexcept {
  return v == SpecialVerdict::Consistent ? "consistent" : "probable-misprint";
}

struct SpecialCaseReport {
  RotationType type = RotationType::Elliptic;
  SpecialConstants constants;
  CmcParams params;
  Interval interval;
  std::size_t samples = 0;
  /// max relative difference between d/du of the closed form and the integrand.
  double max_discrepancy = 0.0;
  double worst_u = 0.0;
  /// max |r r'' + r'^2 + 1| (resp. |r r'' + r'^2 - 1|, |f f'' + f'^2|).
  double max_profile_identity_residual = 0.0;
  double threshold = 1e-6;
  SpecialVerdict verdict = SpecialVerdict::Consistent;
};

/// Differentiates the closed-form angle numerically (five-point stencil) and
/// compares it with the quadrature integrand. For the parabolic family the
/// comparison is on psi = phi / f'.
inline SpecialCaseReport compare_special_case(RotationType type, const SpecialConstants& k,
                                              const CmcParams& p, const Interval& interval,
                                              std::size_t samples = 201, double step = 1e-3,
                                              double threshold = 1e-6) {
  check_params(p);
  if (is_hyperbolic(type)) type = special_hyperbolic_case(k);
  const ProfileFunction profile = special_profile(type, k);
  const Interval inner_iv = interval.shrunk(2.0 * step);
  if (!(inner_iv.length() > 0.0))
    throw Error(ErrorCode::InvariantViolation, "special-case interval is too short");

  auto angle = [&](double u) {
    const double phi = special_phi(type, k, p, u);
    if (type != RotationType::Parabolic) return phi;
    return phi / profile(u).d1;
  };
  SpecialCaseReport rep;
  rep.type = type;
  rep.constants = k;
  rep.params = p;
  rep.interval = interval;
  rep.samples = samples;
  rep.threshold = threshold;
  samples = std::max<std::size_t>(samples, 2);
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = inner_iv.lo + inner_iv.length() * static_cast<double>(i) / (samples - 1);
    const double deriv = (-angle(u + 2 * step) + 8 * angle(u + step) - 8 * angle(u - step) +
                          angle(u - 2 * step)) / (12 * step);
    const Jet2 j = profile(u);
    const double rate = angle_integrand(type, j, p, u);
    const double diff = relative_difference(deriv, rate);
    if (diff > rep.max_discrepancy) {
      rep.max_discrepancy = diff;
      rep.worst_u = u;
    }
    double identity = 0.0;
    switch (type) {
      case RotationType::Elliptic: identity = j.val * j.d2 + j.d1 * j.d1 + 1.0; break;
      case RotationType::Parabolic: identity = j.val * j.d2 + j.d1 * j.d1; break;
      default: identity = j.val * j.d2 + j.d1 * j.d1 - 1.0; break;
    }
    rep.max_profile_identity_residual = std::max(rep.max_profile_identity_residual, std::abs(identity));
  }
  rep.verdict = rep.max_discrepancy <= threshold ? SpecialVerdict::Consistent
                                                 : SpecialVerdict::ProbableMisprint;
  return rep;
}

// JSON serialisation with a fixed key order.

inline nlohmann::ordered_json interval_json(const Interval& iv) {
  return nlohmann::ordered_json::array({iv.lo, iv.hi});
}

inline nlohmann::ordered_json optional_json(const std::optional<double>& x) {
  return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json to_json(const ValidationConfig& c) {
  nlohmann::ordered_json j;
  j["cmc"] = c.cmc_tol;
  j["cmc_fd"] = c.cmc_fd_tol;
  j["arclength"] = c.arclength_tol;
  j["frame_closed"] = c.frame_closed_tol;
  j["frame_numeric"] = c.frame_numeric_tol;
  j["closed_vs_oracle"] = c.closed_vs_oracle_tol;
  j["closed_vs_oracle_fd"] = c.closed_vs_oracle_fd_tol;
  j["sigma_xy"] = c.sigma_xy_tol;
  j["fd_step"] = c.fd_step;
  return j;
}

inline nlohmann::ordered_json to_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["surface_id"] = r.surface_id;
  j["type"] = std::string(to_string(r.type));
  j["grid"] = {{"nu", r.grid.nu}, {"nv", r.grid.nv}, {"u", interval_json(r.grid.u)},
               {"v", interval_json(r.grid.v)}};
  j["target_h2"] = optional_json(r.target_h2);
  j["max_cmc_residual"] = optional_json(r.max_cmc_residual);
  j["max_cmc_residual_fd"] = optional_json(r.max_cmc_residual_fd);
  j["max_arclength_residual"] = r.max_arclength_residual;
  j["max_frame_residual"] = r.max_frame_residual;
  j["max_numeric_frame_residual"] = r.max_numeric_frame_residual;
  j["max_closed_vs_oracle"] = r.max_closed_vs_oracle;
  j["max_closed_vs_oracle_fd"] = r.max_closed_vs_oracle_fd;
  j["max_sigma_xy"] = r.max_sigma_xy;
  j["closed_frame"] = r.has_closed_frame;
  j["degenerate"] = r.degenerate;
  auto flagged = nlohmann::ordered_json::array();
  for (const auto& f : r.flagged_points)
    flagged.push_back({{"u", f.u}, {"v", f.v}, {"reason", f.reason}});
  j["flagged_points"] = flagged;
  j["tolerances"] = to_json(r.tolerances);
  j["passed"] = r.passed();
  return j;
}

inline nlohmann::ordered_json to_json(const SpecialCaseReport& r) {
  nlohmann::ordered_json j;
  j["type"] = std::string(to_string(r.type));
  j["constants"] = {{"a", r.constants.a}, {"b", r.constants.b}, {"d", r.constants.d},
                    {"A", r.constants.A}, {"B", r.constants.B}};
  j["C"] = r.params.C;
  j["h_sign"] = r.params.h_sign;
  j["eta"] = r.params.eta;
  j["interval"] = interval_json(r.interval);
  j["samples"] = r.samples;
  j["max_discrepancy"] = r.max_discrepancy;
  j["worst_u"] = r.worst_u;
  j["max_profile_identity_residual"] = r.max_profile_identity_residual;
  j["threshold"] = r.threshold;
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

}  // namespace cmc
