#pragma once

// Extrinsic geometry of a Lorentz surface patch in R^4_2.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/geometry.hpp"

namespace cmc {

/// Position and partial derivatives up to order two at one parameter point.
struct PatchJet {
  Vec4 z, zu, zv, zuu, zuv, zvv;
};

struct PatchDomain {
  Interval u = Interval::everything();
  Interval v = Interval::everything();
};

/// (u, v) -> PatchJet together with the underlying position map.
class SurfacePatch {
 public:
  using JetFn = std::function<PatchJet(double, double)>;
  using MapFn = std::function<Vec4(double, double)>;

  SurfacePatch(JetFn jet, MapFn map, PatchDomain domain)
      : jet_(std::move(jet)), map_(std::move(map)), domain_(domain) {}

  PatchJet eval(double u, double v) const { return jet_(u, v); }
  Vec4 position(double u, double v) const { return map_(u, v); }
  const PatchDomain& domain() const noexcept { return domain_; }
  const MapFn& map() const noexcept { return map_; }

 private:
  JetFn jet_;
  MapFn map_;
  PatchDomain domain_;
};

struct FirstFundamentalForm {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;

  double determinant() const noexcept { return E * G - F * F; }
};

inline FirstFundamentalForm first_fundamental_form(const PatchJet& j) {
  FirstFundamentalForm I{inner(j.zu, j.zu), inner(j.zu, j.zv), inner(j.zv, j.zv)};
  if (!(I.determinant() < 0.0))
    throw Error(ErrorCode::NonLorentzMetric,
                "induced metric is not Lorentzian (EG - F^2 = " +
                    std::to_string(I.determinant()) + ")");
  return I;
}

inline FirstFundamentalForm first_fundamental_form(const SurfacePatch& patch, double u, double v) {
  return first_fundamental_form(patch.eval(u, v));
}

/// Orthonormal tangent pair: <X,X> = 1, <Y,Y> = -1, <X,Y> = 0.
struct TangentFrame {
  Vec4 X;
  Vec4 Y;
};

/// For E > 0 this is X = z_u / sqrt(E) and Y the normalised residual of z_v,
/// which for E = 1, F = 0 reduces to X = z_u, Y = z_v / sqrt(-G).
inline TangentFrame tangent_frame(const PatchJet& j) {
  first_fundamental_form(j);
  const std::array<std::array<Vec4, 2>, 3> seeds{{
      {j.zu, j.zv},
      {j.zv, j.zu},
      {j.zu + j.zv, j.zu - j.zv},
  }};
  for (const auto& seed : seeds) {
    try {
      const auto out = orthonormalize_indefinite(seed);
      if (out[0].sign == out[1].sign) break;  // cannot happen for a Lorentz plane
      return out[0].sign > 0 ? TangentFrame{out[0].vec, out[1].vec}
                             : TangentFrame{out[1].vec, out[0].vec};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFrame) throw;
    }
  }
  throw Error(ErrorCode::NonLorentzMetric, "could not build a (+,-) tangent frame");
}

inline TangentFrame tangent_frame(const SurfacePatch& patch, double u, double v) {
  return tangent_frame(patch.eval(u, v));
}

/// Adapted frame {X, Y, n1, n2}; eps_i = <n_i, n_i>.
struct Frame {
  Vec4 X, Y, n1, n2;
  int eps1 = 1;
  int eps2 = -1;

  Vec4 normal_projection(const Vec4& w) const noexcept {
    return static_cast<double>(eps1) * inner(w, n1) * n1 +
           static_cast<double>(eps2) * inner(w, n2) * n2;
  }
};

/// Seed pairs whose normals exceed this sup-norm are nearly lightlike residuals;
/// the next pair is tried instead.
inline constexpr double kNormalConditionLimit = 10.0;

/// Normal frame from the two standard basis vectors least aligned with the
/// tangent plane, orthonormalised against {X, Y}. Falls back through the other
/// seed pairs if a residual turns lightlike or nearly so; if every pair is
/// poorly conditioned the best one is used.
inline Frame normal_frame_numeric(const PatchJet& j) {
  const TangentFrame t = tangent_frame(j);
  // Standard basis vectors first; their pairwise sums and differences cover
  // points where every e_i projects onto a null line of the normal plane.
  std::vector<Vec4> seeds(std::begin(basis::standard), std::end(basis::standard));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = i + 1; k < 4; ++k) {
      seeds.push_back(basis::standard[i] + basis::standard[k]);
      seeds.push_back(basis::standard[i] - basis::standard[k]);
    }
  auto alignment = [&](const Vec4& e) {
    return norm_euclid(inner(e, t.X) * t.X - inner(e, t.Y) * t.Y) / norm_euclid(e);
  };
  auto ordered = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = lo; i < hi; ++i) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return alignment(seeds[a]) < alignment(seeds[b]);
    });
    return idx;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto standard = ordered(0, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = i + 1; k < 4; ++k) pairs.emplace_back(standard[i], standard[k]);
  const auto all = ordered(0, seeds.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t k = i + 1; k < all.size(); ++k)
      if (all[i] >= 4 || all[k] >= 4) pairs.emplace_back(all[i], all[k]);

  std::optional<Frame> best;
  double best_size = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) {
    const std::array<Vec4, 4> seed{t.X, t.Y, seeds[a], seeds[b]};
    try {
      const auto out = orthonormalize_indefinite(seed);
      const Frame f{out[0].vec, out[1].vec, out[2].vec, out[3].vec, out[2].sign, out[3].sign};
      const double size = std::max(norm_inf(f.n1), norm_inf(f.n2));
      if (size <= kNormalConditionLimit) return f;
      if (size < best_size) {
        best = f;
        best_size = size;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFrame) throw;
    }
  }
  if (best) return *best;
  throw Error(ErrorCode::DegenerateFrame, "no non-degenerate normal frame at this point");
}

inline Frame normal_frame_numeric(const SurfacePatch& patch, double u, double v) {
  return normal_frame_numeric(patch.eval(u, v));
}

struct SecondFundamentalForm {
  Vec4 XX, XY, YY;
};

/// sigma evaluated on the frame's tangent vectors. X and Y are expanded in
/// {z_u, z_v}, so sigma follows from the normal parts of z_uu, z_uv, z_vv.
inline SecondFundamentalForm second_fundamental_form(const PatchJet& j, const Frame& frame) {
  const FirstFundamentalForm I = first_fundamental_form(j);
  const double det = I.determinant();
  auto coords = [&](const Vec4& w) {
    const double p = inner(w, j.zu), q = inner(w, j.zv);
    return std::array<double, 2>{(I.G * p - I.F * q) / det, (I.E * q - I.F * p) / det};
  };
  const Vec4 nuu = frame.normal_projection(j.zuu);
  const Vec4 nuv = frame.normal_projection(j.zuv);
  const Vec4 nvv = frame.normal_projection(j.zvv);
  auto sigma = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * b[0] * nuu + (a[0] * b[1] + a[1] * b[0]) * nuv + a[1] * b[1] * nvv;
  };
  const auto x = coords(frame.X);
  const auto y = coords(frame.Y);
  return {sigma(x, x), sigma(x, y), sigma(y, y)};
}

inline SecondFundamentalForm second_fundamental_form(const SurfacePatch& patch,
                                                     const Frame& frame, double u, double v) {
  return second_fundamental_form(patch.eval(u, v), frame);
}

struct MeanCurvature {
  Vec4 H;
  double h2 = 0.0;  // <H, H>
};

/// H = (sigma(X,X) - sigma(Y,Y)) / 2: the trace of sigma with respect to the
/// induced metric, whose restriction to {X, Y} is diag(1, -1).
inline MeanCurvature mean_curvature(const PatchJet& j, const Frame& frame) {
  const SecondFundamentalForm s = second_fundamental_form(j, frame);
  const Vec4 H = 0.5 * (s.XX - s.YY);
  return {H, inner(H, H)};
}

inline MeanCurvature mean_curvature(const SurfacePatch& patch, const Frame& frame, double u,
                                    double v) {
  return mean_curvature(patch.eval(u, v), frame);
}

/// Mean curvature with the numerically constructed normal frame.
inline MeanCurvature mean_curvature(const SurfacePatch& patch, double u, double v) {
  const PatchJet j = patch.eval(u, v);
  return mean_curvature(j, normal_frame_numeric(j));
}

/// Second-order central-difference partials of `map`; independent of any
/// analytic derivative information.
inline SurfacePatch fd_patch(SurfacePatch::MapFn map, PatchDomain domain, double h = 1e-4) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvariantViolation, "finite-difference step must be positive");
  auto jet = [map, domain, h](double u, double v) {
    if (!domain.u.contains(u - h) || !domain.u.contains(u + h) || !domain.v.contains(v - h) ||
        !domain.v.contains(v + h))
      throw Error(ErrorCode::StencilOutOfDomain,
                  "finite-difference stencil leaves the domain at (u, v) = (" +
                      std::to_string(u) + ", " + std::to_string(v) + ")");
    const Vec4 c = map(u, v);
    const Vec4 up = map(u + h, v), um = map(u - h, v);
    const Vec4 vp = map(u, v + h), vm = map(u, v - h);
    const Vec4 pp = map(u + h, v + h), pm = map(u + h, v - h);
    const Vec4 mp = map(u - h, v + h), mm = map(u - h, v - h);
    PatchJet j;
    j.z = c;
    j.zu = (up - um) / (2.0 * h);
    j.zv = (vp - vm) / (2.0 * h);
    j.zuu = (up - 2.0 * c + um) / (h * h);
    j.zvv = (vp - 2.0 * c + vm) / (h * h);
    j.zuv = (pp - pm - mp + mm) / (4.0 * h * h);
    return j;
  };
  return SurfacePatch(jet, map, domain);
}

inline SurfacePatch fd_patch(const SurfacePatch& patch, double h = 1e-4) {
  return fd_patch(patch.map(), patch.domain(), h);
}

/// Largest deviation of the ten pairwise inner products of a frame from
/// <X,X> = 1, <Y,Y> = -1, <n_i,n_j> = eps_i delta_ij, all cross terms 0.
inline double frame_residual(const Frame& f) {
  const std::array<Vec4, 4> v{f.X, f.Y, f.n1, f.n2};
  const std::array<double, 4> diag{1.0, -1.0, static_cast<double>(f.eps1),
                                   static_cast<double>(f.eps2)};
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = i; k < 4; ++k) {
      const double expected = i == k ? diag[i] : 0.0;
      worst = std::max(worst, std::abs(inner(v[i], v[k]) - expected));
    }
  return worst;
}

}  // namespace cmc
