#pragma once

// Quadrature for generating curves.
//
// A generating curve is driven by an angle function (phi, or psi for the
// parabolic family) known only through its derivative, and two coordinates
// whose derivatives depend on u and on the angle. IntegratedTrack
//
//   1. splits the interval into panels by adaptive Simpson refinement on the
//      angle rate, then on the coordinate rates;
//   2. represents the angle on each panel by Chebyshev interpolation of values
//      obtained with a 10-point Gauss-Legendre rule from the panel anchor;
//   3. evaluates coordinates on demand by Gauss-Legendre from the panel anchor
//      to the query point.
//
// Values are smooth in u inside each panel and continuous across panels, so
// finite differences of the resulting positions stay meaningful at step
// sizes near 1e-4.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/geometry.hpp"

namespace cmc {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;
  /// Initial uniform split before adaptive refinement.
  int min_panels = 16;
  /// Relative tolerance of the per-panel interpolation and panel-rule checks.
  double smooth_tol = 1e-13;
};

namespace detail {

inline constexpr std::array<double, 5> kGaussNodes{
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGaussWeights{
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

}  // namespace detail

/// Signed 10-point Gauss-Legendre integral of f over [a, b] (b < a allowed).
template <class F>
auto gauss_legendre(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto sum = f(mid + half * detail::kGaussNodes[0]) * 0.0;
  for (std::size_t i = 0; i < detail::kGaussNodes.size(); ++i) {
    const double dx = half * detail::kGaussNodes[i];
    sum = sum + (f(mid - dx) + f(mid + dx)) * detail::kGaussWeights[i];
  }
  return sum * half;
}

/// Scalar adaptive Simpson with Richardson correction.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50) {
  struct Rec {
    F& f;
    int max_depth;
    double go(double a, double b, double fa, double fm, double fb, double whole, double tol,
              int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      if (depth >= max_depth)
        throw Error(ErrorCode::QuadratureFailure, "adaptive Simpson exceeded maximum depth");
      return go(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             go(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  Rec rec{f, max_depth};
  return rec.go(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 0);
}

/// Breakpoints (sorted, including both ends) of the leaves of an adaptive
/// Simpson refinement of a vector integrand on [a, b].
template <std::size_t N, class F>
std::vector<double> simpson_breakpoints(F&& f, double a, double b, const QuadratureConfig& cfg) {
  using Vec = std::array<double, N>;
  auto simpson = [](double len, const Vec& fa, const Vec& fm, const Vec& fb) {
    Vec s{};
    for (std::size_t i = 0; i < N; ++i) s[i] = len / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return s;
  };

  const int n0 = std::max(1, cfg.min_panels);
  const double width = (b - a) / n0;
  // Magnitude estimate for the relative tolerance.
  double magnitude = 0.0;
  std::vector<Vec> samples(2 * n0 + 1);
  for (int i = 0; i <= 2 * n0; ++i) samples[i] = f(a + 0.5 * width * i);
  for (int i = 0; i < n0; ++i) {
    const Vec s = simpson(width, samples[2 * i], samples[2 * i + 1], samples[2 * i + 2]);
    for (double x : s) magnitude += std::abs(x);
  }
  const double total_tol = std::max(cfg.abs_tol, cfg.rel_tol * magnitude);

  std::vector<double> breaks{a};
  std::function<void(double, double, const Vec&, const Vec&, const Vec&, const Vec&, double, int)>
      go = [&](double lo, double hi, const Vec& flo, const Vec& fmid, const Vec& fhi,
               const Vec& whole, double tol, int depth) {
        const double m = 0.5 * (lo + hi);
        const Vec flm = f(0.5 * (lo + m)), frm = f(0.5 * (m + hi));
        const Vec left = simpson(m - lo, flo, flm, fmid);
        const Vec right = simpson(hi - m, fmid, frm, fhi);
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i)
          err = std::max(err, std::abs(left[i] + right[i] - whole[i]));
        if (err <= 15.0 * tol) {
          breaks.push_back(hi);
          return;
        }
        if (depth >= cfg.max_depth)
          throw Error(ErrorCode::QuadratureFailure,
                      "panel refinement exceeded max_depth near u=" + std::to_string(m));
        go(lo, m, flo, flm, fmid, left, 0.5 * tol, depth + 1);
        go(m, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1);
      };
  for (int i = 0; i < n0; ++i) {
    const double lo = a + width * i;
    const double hi = (i == n0 - 1) ? b : a + width * (i + 1);
    const Vec whole = simpson(hi - lo, samples[2 * i], samples[2 * i + 1], samples[2 * i + 2]);
    go(lo, hi, samples[2 * i], samples[2 * i + 1], samples[2 * i + 2], whole,
       total_tol * (hi - lo) / (b - a), 0);
  }
  return breaks;
}

/// Chebyshev-Lobatto interpolation of degree kDegree on one panel.
struct ChebyshevPanel {
  static constexpr int kDegree = 16;

  double a = 0.0;
  double b = 0.0;
  std::array<double, kDegree + 1> values{};

  static double node(double a, double b, int j) noexcept {
    return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * j / kDegree);
  }

  double operator()(double x) const noexcept {
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      const double diff = x - node(a, b, j);
      if (diff == 0.0) return values[j];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == kDegree) w *= 0.5;
      w /= diff;
      num += w * values[j];
      den += w;
    }
    return num / den;
  }
};

/// Angle and coordinates of a generating curve, integrated from a base point.
class IntegratedTrack {
 public:
  using AngleRate = std::function<double(double)>;
  using CoordinateRates = std::function<std::array<double, 2>(double u, double angle)>;

  IntegratedTrack(AngleRate angle_rate, CoordinateRates coordinate_rates, Interval interval,
                  double u0, double angle0, std::array<double, 2> coord0,
                  const QuadratureConfig& cfg = {})
      : angle_rate_(std::move(angle_rate)),
        coordinate_rates_(std::move(coordinate_rates)),
        interval_(interval),
        cfg_(cfg) {
    if (!(interval.length() > 0.0))
      throw Error(ErrorCode::InvariantViolation, "integration interval is empty");
    if (!interval.contains(u0))
      throw Error(ErrorCode::InvariantViolation, "base point u0 lies outside the interval");
    build_angle(u0, angle0);
    build_coordinates(u0, coord0);
  }

  const Interval& interval() const noexcept { return interval_; }
  std::size_t angle_panel_count() const noexcept { return angle_panels_.size(); }
  std::size_t coordinate_panel_count() const noexcept { return coord_panels_.size(); }

  double angle(double u) const {
    check_inside(u);
    return angle_panels_[find(angle_starts_, u)](u);
  }

  std::array<double, 2> coordinates(double u) const {
    check_inside(u);
    const CoordPanel& p = coord_panels_[find(coord_starts_, u)];
    return add(p.anchor_values, integrate_coordinates(p.anchor, u));
  }

 private:
  struct CoordPanel {
    double a = 0.0;
    double b = 0.0;
    double anchor = 0.0;
    std::array<double, 2> anchor_values{};
  };

  static std::array<double, 2> add(std::array<double, 2> x, const std::array<double, 2>& y) {
    x[0] += y[0];
    x[1] += y[1];
    return x;
  }

  void check_inside(double u) const {
    if (!interval_.contains(u))
      throw DomainError(u, "generating curve evaluated outside its interval [" +
                               std::to_string(interval_.lo) + ", " +
                               std::to_string(interval_.hi) + "]");
  }

  static std::size_t find(const std::vector<double>& starts, double u) {
    auto it = std::upper_bound(starts.begin(), starts.end(), u);
    return it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin() - 1);
  }

  double tolerance(double value) const noexcept {
    return std::max(cfg_.abs_tol * 1e-1, cfg_.smooth_tol * (1.0 + std::abs(value)));
  }

  // Breakpoints of the adaptive refinement, with u0 inserted.
  template <std::size_t N, class F>
  std::vector<double> breakpoints(F&& f, double u0) const {
    std::vector<double> br = simpson_breakpoints<N>(f, interval_.lo, interval_.hi, cfg_);
    if (!std::binary_search(br.begin(), br.end(), u0)) {
      br.insert(std::upper_bound(br.begin(), br.end(), u0), u0);
    }
    return br;
  }

  // Builds a Chebyshev panel on [a, b] anchored at `anchor` (a or b) with the
  // given anchor value, splitting it until interpolation is accurate. Returns
  // the value at the far end.
  double angle_panel(double a, double b, bool anchor_left, double anchor_value, int depth,
                     std::vector<ChebyshevPanel>& out) {
    const double anchor = anchor_left ? a : b;
    ChebyshevPanel p{a, b, {}};
    for (int j = 0; j <= ChebyshevPanel::kDegree; ++j) {
      const double t = ChebyshevPanel::node(a, b, j);
      p.values[j] = t == anchor ? anchor_value
                                : anchor_value + gauss_legendre(angle_rate_, anchor, t);
    }
    bool ok = true;
    for (double frac : {0.013, 0.29, 0.51, 0.77, 0.991}) {
      const double t = a + frac * (b - a);
      const double direct = anchor_value + gauss_legendre(angle_rate_, anchor, t);
      if (std::abs(p(t) - direct) > tolerance(direct)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      if (depth >= cfg_.max_depth)
        throw Error(ErrorCode::QuadratureFailure,
                    "angle interpolation did not converge near u=" + std::to_string(0.5 * (a + b)));
      const double m = 0.5 * (a + b);
      if (anchor_left) {
        const double vm = angle_panel(a, m, true, anchor_value, depth + 1, out);
        return angle_panel(m, b, true, vm, depth + 1, out);
      }
      const double vm = angle_panel(m, b, false, anchor_value, depth + 1, out);
      return angle_panel(a, m, false, vm, depth + 1, out);
    }
    out.push_back(p);
    // Lobatto nodes: index 0 is b, index kDegree is a.
    return anchor_left ? p.values[0] : p.values[ChebyshevPanel::kDegree];
  }

  void build_angle(double u0, double angle0) {
    auto rate = [this](double u) { return std::array<double, 1>{angle_rate_(u)}; };
    const std::vector<double> br = breakpoints<1>(rate, u0);
    const auto base = static_cast<std::size_t>(
        std::lower_bound(br.begin(), br.end(), u0) - br.begin());
    std::vector<ChebyshevPanel> panels;
    double value = angle0;
    for (std::size_t i = base; i + 1 < br.size(); ++i)
      value = angle_panel(br[i], br[i + 1], true, value, 0, panels);
    value = angle0;
    for (std::size_t i = base; i > 0; --i)
      value = angle_panel(br[i - 1], br[i], false, value, 0, panels);
    std::sort(panels.begin(), panels.end(),
              [](const ChebyshevPanel& x, const ChebyshevPanel& y) { return x.a < y.a; });
    angle_panels_ = std::move(panels);
    angle_starts_.clear();
    for (const auto& p : angle_panels_) angle_starts_.push_back(p.a);
  }

  std::array<double, 2> integrate_coordinates(double from, double to) const {
    auto rates = [this](double t) {
      const std::array<double, 2> r = coordinate_rates_(t, angle(t));
      return Pair{r[0], r[1]};
    };
    const Pair s = gauss_legendre(rates, from, to);
    return {s.x, s.y};
  }

  struct Pair {
    double x = 0.0, y = 0.0;
    friend Pair operator+(Pair p, Pair q) { return {p.x + q.x, p.y + q.y}; }
    friend Pair operator*(Pair p, double s) { return {p.x * s, p.y * s}; }
  };

  std::array<double, 2> coord_panel(double a, double b, bool anchor_left,
                                    std::array<double, 2> anchor_values, int depth,
                                    std::vector<CoordPanel>& out) {
    const double anchor = anchor_left ? a : b;
    const double far = anchor_left ? b : a;
    const double m = 0.5 * (a + b);
    const auto whole = integrate_coordinates(anchor, far);
    const auto split = add(integrate_coordinates(anchor, m), integrate_coordinates(m, far));
    const bool ok = std::abs(whole[0] - split[0]) <= tolerance(anchor_values[0] + whole[0]) &&
                    std::abs(whole[1] - split[1]) <= tolerance(anchor_values[1] + whole[1]);
    if (!ok) {
      if (depth >= cfg_.max_depth)
        throw Error(ErrorCode::QuadratureFailure,
                    "coordinate quadrature did not converge near u=" + std::to_string(m));
      if (anchor_left) {
        const auto vm = coord_panel(a, m, true, anchor_values, depth + 1, out);
        return coord_panel(m, b, true, vm, depth + 1, out);
      }
      const auto vm = coord_panel(m, b, false, anchor_values, depth + 1, out);
      return coord_panel(a, m, false, vm, depth + 1, out);
    }
    out.push_back({a, b, anchor, anchor_values});
    return add(anchor_values, whole);
  }

  void build_coordinates(double u0, std::array<double, 2> coord0) {
    auto rates = [this](double u) { return coordinate_rates_(u, angle(u)); };
    const std::vector<double> br = breakpoints<2>(rates, u0);
    const auto base = static_cast<std::size_t>(
        std::lower_bound(br.begin(), br.end(), u0) - br.begin());
    std::vector<CoordPanel> panels;
    auto values = coord0;
    for (std::size_t i = base; i + 1 < br.size(); ++i)
      values = coord_panel(br[i], br[i + 1], true, values, 0, panels);
    values = coord0;
    for (std::size_t i = base; i > 0; --i)
      values = coord_panel(br[i - 1], br[i], false, values, 0, panels);
    std::sort(panels.begin(), panels.end(),
              [](const CoordPanel& x, const CoordPanel& y) { return x.a < y.a; });
    coord_panels_ = std::move(panels);
    coord_starts_.clear();
    for (const auto& p : coord_panels_) coord_starts_.push_back(p.a);
  }

  AngleRate angle_rate_;
  CoordinateRates coordinate_rates_;
  Interval interval_;
  QuadratureConfig cfg_;
  std::vector<ChebyshevPanel> angle_panels_;
  std::vector<double> angle_starts_;
  std::vector<CoordPanel> coord_panels_;
  std::vector<double> coord_starts_;
};

}  // namespace cmc
