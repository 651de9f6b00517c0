#pragma once

// Second-order forward-mode jets: (f, f', f'') of a scalar function of u.

#include <cmath>

namespace cmc {

struct Jet2 {
  double val = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet2() noexcept = default;
  constexpr Jet2(double v) noexcept : val(v) {}  // NOLINT: constants promote implicitly
  constexpr Jet2(double v, double first, double second) noexcept
      : val(v), d1(first), d2(second) {}

  static constexpr Jet2 variable(double u) noexcept { return {u, 1.0, 0.0}; }

  constexpr Jet2& operator+=(const Jet2& o) noexcept {
    val += o.val; d1 += o.d1; d2 += o.d2;
    return *this;
  }
  constexpr Jet2& operator-=(const Jet2& o) noexcept {
    val -= o.val; d1 -= o.d1; d2 -= o.d2;
    return *this;
  }
  constexpr Jet2& operator*=(const Jet2& o) noexcept {
    *this = Jet2{val * o.val, d1 * o.val + val * o.d1,
                 d2 * o.val + 2.0 * d1 * o.d1 + val * o.d2};
    return *this;
  }

  friend constexpr Jet2 operator+(Jet2 a, const Jet2& b) noexcept { return a += b; }
  friend constexpr Jet2 operator-(Jet2 a, const Jet2& b) noexcept { return a -= b; }
  friend constexpr Jet2 operator-(const Jet2& a) noexcept { return {-a.val, -a.d1, -a.d2}; }
  friend constexpr Jet2 operator*(Jet2 a, const Jet2& b) noexcept { return a *= b; }
  friend constexpr bool operator==(const Jet2&, const Jet2&) = default;
};

/// Composition g(f) given g, g', g'' evaluated at f.val.
constexpr Jet2 chain(const Jet2& f, double g, double dg, double ddg) noexcept {
  return {g, dg * f.d1, ddg * f.d1 * f.d1 + dg * f.d2};
}

/// 1/f; the caller guarantees f.val != 0.
inline Jet2 reciprocal(const Jet2& f) noexcept {
  const double inv = 1.0 / f.val;
  return chain(f, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) noexcept { return a * reciprocal(b); }

inline Jet2 sqrt(const Jet2& f) noexcept {
  const double s = std::sqrt(f.val);
  return chain(f, s, 0.5 / s, -0.25 / (s * f.val));
}
inline Jet2 sin(const Jet2& f) noexcept {
  const double s = std::sin(f.val), c = std::cos(f.val);
  return chain(f, s, c, -s);
}
inline Jet2 cos(const Jet2& f) noexcept {
  const double s = std::sin(f.val), c = std::cos(f.val);
  return chain(f, c, -s, -c);
}
inline Jet2 sinh(const Jet2& f) noexcept {
  const double s = std::sinh(f.val), c = std::cosh(f.val);
  return chain(f, s, c, s);
}
inline Jet2 cosh(const Jet2& f) noexcept {
  const double s = std::sinh(f.val), c = std::cosh(f.val);
  return chain(f, c, s, c);
}
inline Jet2 exp(const Jet2& f) noexcept {
  const double e = std::exp(f.val);
  return chain(f, e, e, e);
}
inline Jet2 log(const Jet2& f) noexcept {
  const double inv = 1.0 / f.val;
  return chain(f, std::log(f.val), inv, -inv * inv);
}
/// |f| away from f = 0.
inline Jet2 abs(const Jet2& f) noexcept {
  const double s = f.val < 0 ? -1.0 : 1.0;
  return {std::abs(f.val), s * f.d1, s * f.d2};
}
/// f^p for a constant exponent p.
inline Jet2 pow(const Jet2& f, double p) noexcept {
  if (p == 0.0) return Jet2{1.0};
  if (p == 1.0) return f;
  if (p == 2.0) return f * f;
  return chain(f, std::pow(f.val, p), p * std::pow(f.val, p - 1.0),
               p * (p - 1.0) * std::pow(f.val, p - 2.0));
}

inline bool is_finite(const Jet2& j) noexcept {
  return std::isfinite(j.val) && std::isfinite(j.d1) && std::isfinite(j.d2);
}

}  // namespace cmc
