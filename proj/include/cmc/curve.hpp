#pragma once

// Generating curves of rotational surfaces. Component order by family:
//   Elliptic    (x1, x2, r)   curve (x1, x2, r, 0) in span{e1, e2, e3}
//   Hyperbolic  (r, x2, x4)   curve (r, x2, 0, x4) in span{e1, e2, e4}
//   Parabolic   (x1, f, g)    curve x1 e1 + f xi1 + g xi2

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/expr.hpp"
#include "cmc/geometry.hpp"
#include "cmc/jet.hpp"

namespace cmc {

/// HyperbolicA: (r')^2 > 1, HyperbolicB: (r')^2 < 1.
enum class RotationType { Elliptic, HyperbolicA, HyperbolicB, Parabolic };

constexpr std::string_view to_string(RotationType t) noexcept {
  switch (t) {
    case RotationType::Elliptic: return "elliptic";
    case RotationType::HyperbolicA: return "hyperbolicA";
    case RotationType::HyperbolicB: return "hyperbolicB";
    case RotationType::Parabolic: return "parabolic";
  }
  return "?";
}

inline std::optional<RotationType> parse_rotation_type(std::string_view s) noexcept {
  for (auto t : {RotationType::Elliptic, RotationType::HyperbolicA, RotationType::HyperbolicB,
                 RotationType::Parabolic})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

constexpr bool is_hyperbolic(RotationType t) noexcept {
  return t == RotationType::HyperbolicA || t == RotationType::HyperbolicB;
}

/// Column names of the three components, in storage order.
constexpr std::array<std::string_view, 3> component_names(RotationType t) noexcept {
  switch (t) {
    case RotationType::Elliptic: return {"x1", "x2", "r"};
    case RotationType::HyperbolicA:
    case RotationType::HyperbolicB: return {"r", "x2", "x4"};
    case RotationType::Parabolic: return {"x1", "f", "g"};
  }
  return {"?", "?", "?"};
}

using CurveJets = std::array<Jet2, 3>;

class GeneratingCurve {
 public:
  using EvalFn = std::function<CurveJets(double)>;

  GeneratingCurve(RotationType type, Interval domain, EvalFn eval)
      : type_(type), domain_(domain), eval_(std::move(eval)) {}

  RotationType type() const noexcept { return type_; }
  const Interval& domain() const noexcept { return domain_; }

  CurveJets operator()(double u) const {
    if (!domain_.contains(u)) throw DomainError(u, "generating curve evaluated outside its domain");
    return eval_(u);
  }

  /// Profile function: r for elliptic/hyperbolic curves, f for parabolic ones.
  Jet2 profile(double u) const {
    const CurveJets c = (*this)(u);
    switch (type_) {
      case RotationType::Elliptic: return c[2];
      case RotationType::Parabolic: return c[1];
      default: return c[0];
    }
  }

 private:
  RotationType type_;
  Interval domain_;
  EvalFn eval_;
};

/// Type-appropriate arc-length expression minus one:
///   (x1')^2 + (x2')^2 - (r')^2 - 1,  (r')^2 + (x2')^2 - (x4')^2 - 1,  (x1')^2 - 2 f'g' - 1.
inline double arclength_defect(RotationType t, const CurveJets& c) noexcept {
  switch (t) {
    case RotationType::Elliptic:
      return c[0].d1 * c[0].d1 + c[1].d1 * c[1].d1 - c[2].d1 * c[2].d1 - 1.0;
    case RotationType::HyperbolicA:
    case RotationType::HyperbolicB:
      return c[0].d1 * c[0].d1 + c[1].d1 * c[1].d1 - c[2].d1 * c[2].d1 - 1.0;
    case RotationType::Parabolic: return c[0].d1 * c[0].d1 - 2.0 * c[1].d1 * c[2].d1 - 1.0;
  }
  return 0.0;
}

/// The quantity whose vanishing puts the surface into a hyperplane:
///   x1'x2'' - x1''x2',  x2'x4'' - x2''x4',  x1''f' - x1'f''.
inline double hyperplane_indicator(RotationType t, const CurveJets& c) noexcept {
  switch (t) {
    case RotationType::Elliptic: return c[0].d1 * c[1].d2 - c[0].d2 * c[1].d1;
    case RotationType::HyperbolicA:
    case RotationType::HyperbolicB: return c[1].d1 * c[2].d2 - c[1].d2 * c[2].d1;
    case RotationType::Parabolic: return c[0].d2 * c[1].d1 - c[0].d1 * c[1].d2;
  }
  return 0.0;
}

/// A curve whose three components are given as expressions in u.
inline GeneratingCurve analytic_curve(RotationType type, std::array<Expr, 3> components,
                                      ConstantMap consts, Interval domain) {
  auto state = std::make_shared<const std::pair<std::array<Expr, 3>, ConstantMap>>(
      std::move(components), std::move(consts));
  return GeneratingCurve(type, domain, [state](double u) {
    const auto& [e, k] = *state;
    return CurveJets{eval_jet(e[0], u, k), eval_jet(e[1], u, k), eval_jet(e[2], u, k)};
  });
}

inline GeneratingCurve analytic_curve(RotationType type,
                                      const std::array<std::string_view, 3>& components,
                                      ConstantMap consts, Interval domain) {
  const ConstantNames names = names_of(consts);
  return analytic_curve(type, {parse(components[0], names), parse(components[1], names),
                               parse(components[2], names)},
                        std::move(consts), domain);
}

/// One sample of a curve: u plus the component jets.
struct CurveSample {
  double u = 0.0;
  CurveJets jets{};
};

/// Evaluates a curve at n + 1 evenly spaced points of its domain.
inline std::vector<CurveSample> sample_curve(const GeneratingCurve& curve, std::size_t n) {
  std::vector<CurveSample> out;
  const Interval d = curve.domain();
  n = std::max<std::size_t>(n, 1);
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double u = i == n ? d.hi : d.lo + d.length() * static_cast<double>(i) / static_cast<double>(n);
    out.push_back({u, curve(u)});
  }
  return out;
}

namespace detail {

// Quintic Hermite interpolation of (value, d1, d2) data on [u0, u1].
inline Jet2 quintic_hermite(double u0, const Jet2& p, double u1, const Jet2& q, double u) {
  const double h = u1 - u0;
  const double s = (u - u0) / h;
  const double c0 = p.val, c1 = h * p.d1, c2 = 0.5 * h * h * p.d2;
  const double A = q.val - c0 - c1 - c2;
  const double B = h * q.d1 - c1 - 2.0 * c2;
  const double C = h * h * q.d2 - 2.0 * c2;
  const double c3 = 10.0 * A - 4.0 * B + 0.5 * C;
  const double c4 = -15.0 * A + 7.0 * B - C;
  const double c5 = 6.0 * A - 3.0 * B + 0.5 * C;
  const double val = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
  const double dval = c1 + s * (2.0 * c2 + s * (3.0 * c3 + s * (4.0 * c4 + s * 5.0 * c5)));
  const double ddval = 2.0 * c2 + s * (6.0 * c3 + s * (12.0 * c4 + s * 20.0 * c5));
  return {val, dval / h, ddval / (h * h)};
}

}  // namespace detail

/// Rebuilds a curve from samples (e.g. a CSV export) by piecewise quintic
/// Hermite interpolation; exact at the sample points.
inline GeneratingCurve sampled_curve(RotationType type, std::vector<CurveSample> samples) {
  if (samples.size() < 2)
    throw Error(ErrorCode::InvariantViolation, "a sampled curve needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].u > samples[i - 1].u))
      throw Error(ErrorCode::InvariantViolation, "curve samples must be strictly increasing in u");
  const Interval domain{samples.front().u, samples.back().u};
  auto data = std::make_shared<const std::vector<CurveSample>>(std::move(samples));
  return GeneratingCurve(type, domain, [data](double u) {
    const auto& s = *data;
    auto it = std::upper_bound(s.begin(), s.end(), u,
                               [](double x, const CurveSample& c) { return x < c.u; });
    std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    k = std::min(k, s.size() - 2);
    if (u == s[k].u) return s[k].jets;
    if (u == s[k + 1].u) return s[k + 1].jets;
    CurveJets out;
    for (std::size_t c = 0; c < 3; ++c)
      out[c] = detail::quintic_hermite(s[k].u, s[k].jets[c], s[k + 1].u, s[k + 1].jets[c], u);
    return out;
  });
}

}  // namespace cmc
