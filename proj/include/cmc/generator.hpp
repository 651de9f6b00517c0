#pragma once

// Generating curves of constant-mean-curvature rotational surfaces from a
// profile function by quadrature of the angle equation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmc/curve.hpp"
#include "cmc/errors.hpp"
#include "cmc/expr.hpp"
#include "cmc/geometry.hpp"
#include "cmc/jet.hpp"
#include "cmc/quadrature.hpp"
#include "cmc/rotational.hpp"

namespace cmc {

struct CmcParams {
  double C = 1.0;       // <H,H> = h_sign * C^2
  int h_sign = 1;
  int eta = 1;          // sign of the angle rate
  std::optional<double> u0;  // base point; defaults to the left end of the interval
  double phi0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double A = 0.0;       // parabolic: psi(u0) = A
  /// Multiplies the angle and its rate; 1 reproduces the CMC curve, anything
  /// else yields a deliberately wrong one.
  double phi_scale = 1.0;

  double target_h2() const noexcept { return h_sign * C * C; }
};

inline void check_params(const CmcParams& p) {
  if (!(p.C != 0.0) || !std::isfinite(p.C))
    throw Error(ErrorCode::InvariantViolation, "C must be finite and nonzero");
  if (p.h_sign != 1 && p.h_sign != -1)
    throw Error(ErrorCode::InvariantViolation, "h_sign must be +1 or -1");
  if (p.eta != 1 && p.eta != -1) throw Error(ErrorCode::InvariantViolation, "eta must be +1 or -1");
  if (!std::isfinite(p.phi0) || !std::isfinite(p.c1) || !std::isfinite(p.c2) ||
      !std::isfinite(p.A) || !std::isfinite(p.phi_scale) || (p.u0 && !std::isfinite(*p.u0)))
    throw Error(ErrorCode::InvariantViolation, "integration constants must be finite");
}

namespace detail {

inline std::string u_suffix(double u) { return " at u=" + std::to_string(u); }

inline double checked_root(double radicand, double u) {
  if (!(radicand >= 0.0))
    throw Error(ErrorCode::NegativeRadicand,
                "radicand " + std::to_string(radicand) + " < 0" + u_suffix(u) +
                    "; (C, h_sign) is infeasible here");
  return std::sqrt(radicand);
}

inline void require_positive(const Jet2& r, double u) {
  if (!(r.val > 0.0))
    throw Error(ErrorCode::NonpositiveProfile, "profile r = " + std::to_string(r.val) +
                                                   " is not positive" + u_suffix(u));
}

}  // namespace detail

/// eta sqrt((r r'' + r'^2 + 1)^2 + h 4 C^2 r^2 (1 + r'^2)) / (r (1 + r'^2)).
inline double phi_integrand_elliptic(const Jet2& r, const CmcParams& p, double u) {
  detail::require_positive(r, u);
  const double s2 = 1.0 + r.d1 * r.d1;
  const double Q = r.val * r.d2 + r.d1 * r.d1 + 1.0;
  const double root =
      detail::checked_root(Q * Q + p.h_sign * 4.0 * p.C * p.C * r.val * r.val * s2, u);
  return p.eta * root / (r.val * s2);
}

inline double phi_integrand_elliptic(const ProfileFunction& r, const CmcParams& p, double u) {
  return phi_integrand_elliptic(r(u), p, u);
}

/// eta sqrt((r r'' + r'^2 - 1)^2 + h 4 C^2 r^2 (r'^2 - 1)) / (r (r'^2 - 1)).
inline double phi_integrand_hyperbolic(const Jet2& r, const CmcParams& p, double u,
                                       double slope_tol = kSlopeTolerance) {
  detail::require_positive(r, u);
  const double excess = r.d1 * r.d1 - 1.0;
  if (std::abs(excess) < slope_tol)
    throw Error(ErrorCode::NearNullSlope, "(r')^2 too close to 1" + detail::u_suffix(u));
  const double Q = r.val * r.d2 + r.d1 * r.d1 - 1.0;
  const double root =
      detail::checked_root(Q * Q + p.h_sign * 4.0 * p.C * p.C * r.val * r.val * excess, u);
  return p.eta * root / (r.val * excess);
}

inline double phi_integrand_hyperbolic(const ProfileFunction& r, const CmcParams& p, double u) {
  return phi_integrand_hyperbolic(r(u), p, u);
}

/// psi' = eta (1/f') sqrt(((ln|f f'|)')^2 + h 4 C^2); the angle is phi = f' psi.
inline double psi_integrand_parabolic(const Jet2& f, const CmcParams& p, double u) {
  if (!(f.d1 != 0.0))
    throw Error(ErrorCode::ZeroDerivativeProfile, "f' = 0" + detail::u_suffix(u));
  if (!(f.val != 0.0)) throw Error(ErrorCode::NonpositiveProfile, "f = 0" + detail::u_suffix(u));
  const double L = (f.val * f.d2 + f.d1 * f.d1) / (f.val * f.d1);
  const double root = detail::checked_root(L * L + p.h_sign * 4.0 * p.C * p.C, u);
  return p.eta * root / f.d1;
}

inline double psi_integrand_parabolic(const ProfileFunction& f, const CmcParams& p, double u) {
  return psi_integrand_parabolic(f(u), p, u);
}

/// The angle-rate integrand of the given family (psi' for parabolic).
inline double angle_integrand(RotationType type, const Jet2& profile, const CmcParams& p,
                              double u) {
  switch (type) {
    case RotationType::Elliptic: return phi_integrand_elliptic(profile, p, u);
    case RotationType::Parabolic: return psi_integrand_parabolic(profile, p, u);
    default: return phi_integrand_hyperbolic(profile, p, u);
  }
}

namespace detail {

inline constexpr std::size_t kPreconditionSamples = 256;

inline void check_case(RotationType type, const Jet2& r, double u) {
  const double excess = r.d1 * r.d1 - 1.0;
  if (type == RotationType::HyperbolicA && excess < -kSlopeTolerance)
    throw Error(ErrorCode::CaseMismatch,
                "case A needs (r')^2 > 1 but (r')^2 = " + std::to_string(r.d1 * r.d1) + u_suffix(u));
  if (type == RotationType::HyperbolicB && excess > kSlopeTolerance)
    throw Error(ErrorCode::CaseMismatch,
                "case B needs (r')^2 < 1 but (r')^2 = " + std::to_string(r.d1 * r.d1) + u_suffix(u));
}

inline std::vector<double> scan_points(const Interval& iv) {
  std::vector<double> pts;
  for (std::size_t i = 0; i <= kPreconditionSamples; ++i)
    pts.push_back(i == kPreconditionSamples
                      ? iv.hi
                      : iv.lo + iv.length() * static_cast<double>(i) / kPreconditionSamples);
  return pts;
}

struct GeneratorSetup {
  double u0;
};

inline GeneratorSetup prepare(RotationType type, const ProfileFunction& profile,
                              const CmcParams& p, const Interval& interval) {
  check_params(p);
  if (!(interval.length() > 0.0) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi))
    throw Error(ErrorCode::InvariantViolation, "generation interval must be finite and nonempty");
  if (!profile.domain().contains(interval.lo) || !profile.domain().contains(interval.hi))
    throw DomainError(interval.lo, "interval leaves the profile's domain");
  const double u0 = p.u0.value_or(interval.lo);
  if (!interval.contains(u0)) throw DomainError(u0, "base point u0 outside the interval");
  const std::vector<double> pts = scan_points(interval);
  if (is_hyperbolic(type))
    for (double u : pts) check_case(type, profile(u), u);
  for (double u : pts) angle_integrand(type, profile(u), p, u);
  return {u0};
}

struct GeneratorState {
  RotationType type;
  ProfileFunction profile;
  CmcParams params;
  std::unique_ptr<IntegratedTrack> track;

  double rate(double u) const {
    return params.phi_scale * angle_integrand(type, profile(u), params, u);
  }
};

}  // namespace detail

/// Elliptic curve (x1, x2, r): phi' from the angle equation,
/// x1' = s cos phi, x2' = s sin phi, s = sqrt(1 + r'^2).
inline GeneratingCurve generate_elliptic(const ProfileFunction& r, const CmcParams& p,
                                         const Interval& interval,
                                         const QuadratureConfig& cfg = {}) {
  const auto setup = detail::prepare(RotationType::Elliptic, r, p, interval);
  auto st = std::make_shared<detail::GeneratorState>(
      detail::GeneratorState{RotationType::Elliptic, r, p, nullptr});
  const detail::GeneratorState* raw = st.get();
  st->track = std::make_unique<IntegratedTrack>(
      [raw](double u) { return raw->rate(u); },
      [raw](double u, double phi) {
        const Jet2 rj = raw->profile(u);
        const double s = std::sqrt(1.0 + rj.d1 * rj.d1);
        return std::array<double, 2>{s * std::cos(phi), s * std::sin(phi)};
      },
      interval, setup.u0, p.phi_scale * p.phi0, std::array<double, 2>{p.c1, p.c2}, cfg);
  return GeneratingCurve(RotationType::Elliptic, interval, [st](double u) {
    const Jet2 rj = st->profile(u);
    const double phi = st->track->angle(u);
    const double dphi = st->rate(u);
    const auto xy = st->track->coordinates(u);
    const double s = std::sqrt(1.0 + rj.d1 * rj.d1);
    const double ds = rj.d1 * rj.d2 / s;
    const double c = std::cos(phi), sn = std::sin(phi);
    return CurveJets{Jet2{xy[0], s * c, ds * c - s * sn * dphi},
                     Jet2{xy[1], s * sn, ds * sn + s * c * dphi}, rj};
  });
}

/// Hyperbolic curve (r, x2, x4). Case A: x2' = w sinh phi, x4' = w cosh phi,
/// w = sqrt(r'^2 - 1). Case B: x2' = w cosh phi, x4' = w sinh phi, w = sqrt(1 - r'^2).
inline GeneratingCurve generate_hyperbolic(const ProfileFunction& r, const CmcParams& p,
                                           const Interval& interval, RotationType which,
                                           const QuadratureConfig& cfg = {}) {
  if (!is_hyperbolic(which))
    throw Error(ErrorCode::InvariantViolation, "generate_hyperbolic needs case A or B");
  const auto setup = detail::prepare(which, r, p, interval);
  const bool case_a = which == RotationType::HyperbolicA;
  auto st = std::make_shared<detail::GeneratorState>(detail::GeneratorState{which, r, p, nullptr});
  const detail::GeneratorState* raw = st.get();
  st->track = std::make_unique<IntegratedTrack>(
      [raw](double u) { return raw->rate(u); },
      [raw, case_a](double u, double phi) {
        const Jet2 rj = raw->profile(u);
        const double w = std::sqrt(std::abs(rj.d1 * rj.d1 - 1.0));
        return case_a ? std::array<double, 2>{w * std::sinh(phi), w * std::cosh(phi)}
                      : std::array<double, 2>{w * std::cosh(phi), w * std::sinh(phi)};
      },
      interval, setup.u0, p.phi_scale * p.phi0, std::array<double, 2>{p.c1, p.c2}, cfg);
  return GeneratingCurve(which, interval, [st, case_a](double u) {
    const Jet2 rj = st->profile(u);
    const double phi = st->track->angle(u);
    const double dphi = st->rate(u);
    const auto xy = st->track->coordinates(u);
    const double w = std::sqrt(std::abs(rj.d1 * rj.d1 - 1.0));
    const double dw = (case_a ? 1.0 : -1.0) * rj.d1 * rj.d2 / w;
    const double ch = std::cosh(phi), sh = std::sinh(phi);
    if (case_a)
      return CurveJets{rj, Jet2{xy[0], w * sh, dw * sh + w * ch * dphi},
                       Jet2{xy[1], w * ch, dw * ch + w * sh * dphi}};
    return CurveJets{rj, Jet2{xy[0], w * ch, dw * ch + w * sh * dphi},
                     Jet2{xy[1], w * sh, dw * sh + w * ch * dphi}};
  });
}

/// Parabolic curve (x1, f, g): psi = A + integral of psi', phi = f' psi,
/// x1' = phi, g' = (phi^2 - 1) / (2 f').
inline GeneratingCurve generate_parabolic(const ProfileFunction& f, const CmcParams& p,
                                          const Interval& interval,
                                          const QuadratureConfig& cfg = {}) {
  const auto setup = detail::prepare(RotationType::Parabolic, f, p, interval);
  auto st = std::make_shared<detail::GeneratorState>(
      detail::GeneratorState{RotationType::Parabolic, f, p, nullptr});
  const detail::GeneratorState* raw = st.get();
  st->track = std::make_unique<IntegratedTrack>(
      [raw](double u) { return raw->rate(u); },
      [raw](double u, double psi) {
        const Jet2 fj = raw->profile(u);
        const double phi = fj.d1 * psi;
        return std::array<double, 2>{phi, (phi * phi - 1.0) / (2.0 * fj.d1)};
      },
      interval, setup.u0, p.phi_scale * p.A, std::array<double, 2>{p.c1, p.c2}, cfg);
  return GeneratingCurve(RotationType::Parabolic, interval, [st](double u) {
    const Jet2 fj = st->profile(u);
    const double psi = st->track->angle(u);
    const double dpsi = st->rate(u);
    const auto xg = st->track->coordinates(u);
    const double phi = fj.d1 * psi;
    const double dphi = fj.d2 * psi + fj.d1 * dpsi;
    const double fp = fj.d1;
    return CurveJets{Jet2{xg[0], phi, dphi}, fj,
                     Jet2{xg[1], (phi * phi - 1.0) / (2.0 * fp),
                          phi * dphi / fp - (phi * phi - 1.0) * fj.d2 / (2.0 * fp * fp)}};
  });
}

inline GeneratingCurve generate(RotationType type, const ProfileFunction& profile,
                                const CmcParams& p, const Interval& interval,
                                const QuadratureConfig& cfg = {}) {
  switch (type) {
    case RotationType::Elliptic: return generate_elliptic(profile, p, interval, cfg);
    case RotationType::Parabolic: return generate_parabolic(profile, p, interval, cfg);
    default: return generate_hyperbolic(profile, p, interval, type, cfg);
  }
}

/// Constants of the closed-form special profiles
///   elliptic    r = sqrt(-u^2 + 2au + b)   (r r'' + r'^2 + 1 = 0)
///   hyperbolic  r = sqrt(u^2 + 2au + b)    (r r'' + r'^2 - 1 = 0)
///   parabolic   f = sqrt(2au + b)          (f f'' + f'^2 = 0)
struct SpecialConstants {
  double a = 1.0;
  double b = 0.0;
  double d = 0.0;
  double A = 0.0;
  double B = 1.0;
};

/// The special profile as a ProfileFunction. For the hyperbolic profile
/// r'^2 - 1 = (a^2 - b) / r^2, so the case is A when a^2 > b and B otherwise.
inline ProfileFunction special_profile(RotationType type, const SpecialConstants& k) {
  const ConstantMap consts{{"a", k.a}, {"b", k.b}};
  switch (type) {
    case RotationType::Elliptic: return ProfileFunction::from_text("sqrt(-u^2+2*a*u+b)", consts);
    case RotationType::Parabolic: return ProfileFunction::from_text("sqrt(2*a*u+b)", consts);
    default: return ProfileFunction::from_text("sqrt(u^2+2*a*u+b)", consts);
  }
}

inline RotationType special_hyperbolic_case(const SpecialConstants& k) {
  return k.a * k.a > k.b ? RotationType::HyperbolicA : RotationType::HyperbolicB;
}

/// Closed-form angle of the special profiles, evaluated as displayed:
///   elliptic    2C/sqrt(a^2+b) ((u-a)/2 sqrt(R) + (a^2+b)/2 asin((u-a)/sqrt(a^2+b)) + d)
///   hyperbolic  2 eta C/sqrt(e(a^2-b)) ((u+a)/2 sqrt(R) - e(a^2-b)/2 ln|u+a+sqrt(R)| + d),
///               e = sign(a^2 - b)
///   parabolic   (A + eta 2CB/(3a) (2au+b)^(3/2)) / sqrt(2au+b)
/// For the parabolic family this is phi; psi = phi / f'.
inline double special_phi(RotationType type, const SpecialConstants& k, const CmcParams& p,
                          double u) {
  const double a = k.a, b = k.b;
  if (a == 0.0) throw DomainError(u, "special profiles need a != 0");
  switch (type) {
    case RotationType::Elliptic: {
      const double R = -u * u + 2.0 * a * u + b;
      const double m = a * a + b;
      if (!(R > 0.0) || !(m > 0.0)) throw DomainError(u, "outside the special elliptic profile");
      return 2.0 * p.C / std::sqrt(m) *
             ((u - a) / 2.0 * std::sqrt(R) + m / 2.0 * std::asin((u - a) / std::sqrt(m)) + k.d);
    }
    case RotationType::Parabolic: {
      const double S2 = 2.0 * a * u + b;
      if (!(S2 > 0.0)) throw DomainError(u, "outside the special parabolic profile");
      const double S = std::sqrt(S2);
      return (k.A + p.eta * 2.0 * p.C * k.B / (3.0 * a) * S2 * S) / S;
    }
    default: {
      const double R = u * u + 2.0 * a * u + b;
      const double m = a * a - b;
      if (!(R > 0.0) || m == 0.0) throw DomainError(u, "outside the special hyperbolic profile");
      const double e = m > 0.0 ? 1.0 : -1.0;
      const double sR = std::sqrt(R);
      return 2.0 * p.eta * p.C / std::sqrt(e * m) *
             ((u + a) / 2.0 * sR - e * m / 2.0 * std::log(std::abs(u + a + sR)) + k.d);
    }
  }
}

struct ValidityOptions {
  std::size_t samples = 1024;
  double bisection_tol = 1e-10;
  double min_length = 1e-8;
};

/// True where the generator's pointwise preconditions hold at u.
inline bool generator_valid_at(RotationType type, const ProfileFunction& profile,
                               const CmcParams& p, double u) {
  try {
    if (!profile.domain().contains(u)) return false;
    const Jet2 j = profile(u);
    if (!is_finite(j)) return false;
    if (is_hyperbolic(type)) detail::check_case(type, j, u);
    return std::isfinite(angle_integrand(type, j, p, u));
  } catch (const Error&) {
    return false;
  }
}

namespace detail {

/// Smallest of the quantities that must stay positive (r or f, |f'|, the
/// slope excess beyond its tolerance, the radicand). Only its sign and its
/// local minima are used.
inline double validity_margin(RotationType type, const ProfileFunction& profile,
                              const CmcParams& p, double u) {
  constexpr double kInvalid = -std::numeric_limits<double>::infinity();
  Jet2 j;
  try {
    j = profile(u);
  } catch (const Error&) {
    return kInvalid;
  }
  if (!is_finite(j)) return kInvalid;
  const double k = p.h_sign * 4.0 * p.C * p.C;
  switch (type) {
    case RotationType::Elliptic: {
      const double s2 = 1.0 + j.d1 * j.d1;
      const double Q = j.val * j.d2 + j.d1 * j.d1 + 1.0;
      return std::min(j.val, Q * Q + k * j.val * j.val * s2);
    }
    case RotationType::Parabolic: {
      const double m = std::min(std::abs(j.d1), std::abs(j.val));
      if (!(m > 0.0)) return m;
      const double L = (j.val * j.d2 + j.d1 * j.d1) / (j.val * j.d1);
      return std::min(m, L * L + k);
    }
    default: {
      const double excess = j.d1 * j.d1 - 1.0;
      const double slope =
          (type == RotationType::HyperbolicA ? excess : -excess) - kSlopeTolerance;
      const double Q = j.val * j.d2 + j.d1 * j.d1 - 1.0;
      return std::min({j.val, slope, Q * Q + k * j.val * j.val * excess});
    }
  }
}

}  // namespace detail

/// Maximal subintervals of `interval` on which the generator's preconditions
/// hold. Sampling finds sign changes; each interior local minimum of the
/// validity margin is searched for a touching zero the samples stepped over.
/// Boundaries are then located by bisection.
inline std::vector<Interval> domain_validity(const ProfileFunction& profile, const CmcParams& p,
                                             const Interval& interval, RotationType type,
                                             const ValidityOptions& opt = {}) {
  std::vector<Interval> out;
  if (!(interval.length() > 0.0)) return out;
  auto valid = [&](double u) { return generator_valid_at(type, profile, p, u); };
  auto margin = [&](double u) { return detail::validity_margin(type, profile, p, u); };
  const std::size_t n = std::max<std::size_t>(opt.samples, 2);
  std::vector<double> us(n + 1), ms(n + 1);
  std::vector<char> ok(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    us[i] = i == n ? interval.hi : interval.lo + interval.length() * static_cast<double>(i) / n;
    ok[i] = valid(us[i]) ? 1 : 0;
    ms[i] = margin(us[i]);
  }

  std::vector<double> pts;
  std::vector<char> pts_ok;
  for (std::size_t i = 0; i <= n; ++i) {
    pts.push_back(us[i]);
    pts_ok.push_back(ok[i]);
    if (i == 0 || i == n || !ok[i - 1] || !ok[i] || !ok[i + 1]) continue;
    if (!(ms[i] < ms[i - 1] && ms[i] <= ms[i + 1])) continue;
    // Golden-section search for the smallest margin in (us[i-1], us[i+1]).
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = us[i - 1], b = us[i + 1];
    double c = b - g * (b - a), d = a + g * (b - a);
    double mc = margin(c), md = margin(d);
    while (b - a > opt.bisection_tol) {
      if (mc < md) {
        b = d;
        d = c;
        md = mc;
        c = b - g * (b - a);
        mc = margin(c);
      } else {
        a = c;
        c = d;
        mc = md;
        d = a + g * (b - a);
        md = margin(d);
      }
    }
    const double m = mc < md ? c : d;
    if (valid(m)) continue;
    // Keep the points ordered: the dip lies on one side of us[i] or the other.
    if (m < us[i]) {
      pts.insert(pts.end() - 1, m);
      pts_ok.insert(pts_ok.end() - 1, 0);
    } else {
      pts.push_back(m);
      pts_ok.push_back(0);
    }
  }

  auto refine = [&](double good, double bad) {
    while (std::abs(bad - good) > opt.bisection_tol) {
      const double mid = 0.5 * (good + bad);
      (valid(mid) ? good : bad) = mid;
    }
    return good;
  };
  const std::size_t last = pts.size() - 1;
  std::size_t i = 0;
  while (i <= last) {
    if (!pts_ok[i]) {
      ++i;
      continue;
    }
    std::size_t k = i;
    while (k + 1 <= last && pts_ok[k + 1]) ++k;
    const double lo = i == 0 ? pts[0] : refine(pts[i], pts[i - 1]);
    const double hi = k == last ? pts[last] : refine(pts[k], pts[k + 1]);
    if (hi - lo >= opt.min_length) out.push_back({lo, hi});
    i = k + 1;
  }
  return out;
}

}  // namespace cmc
