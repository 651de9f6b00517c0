#pragma once

// Indefinite linear algebra of R^4 with the neutral metric dx1^2 + dx2^2 - dx3^2 - dx4^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cmc/errors.hpp"

namespace cmc {

inline constexpr double kCausalTolerance = 1e-10;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr double length() const noexcept { return hi - lo; }
  constexpr double mid() const noexcept { return 0.5 * (lo + hi); }
  constexpr bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  constexpr Interval shrunk(double margin) const noexcept {
    return {lo + margin, hi - margin};
  }

  static constexpr Interval everything() noexcept {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

struct Vec4 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double x4 = 0.0;

  constexpr double operator[](std::size_t i) const noexcept {
    return i == 0 ? x1 : i == 1 ? x2 : i == 2 ? x3 : x4;
  }
  constexpr double& operator[](std::size_t i) noexcept {
    return i == 0 ? x1 : i == 1 ? x2 : i == 2 ? x3 : x4;
  }

  constexpr Vec4& operator+=(const Vec4& o) noexcept {
    x1 += o.x1; x2 += o.x2; x3 += o.x3; x4 += o.x4;
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) noexcept {
    x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; x4 -= o.x4;
    return *this;
  }
  constexpr Vec4& operator*=(double s) noexcept {
    x1 *= s; x2 *= s; x3 *= s; x4 *= s;
    return *this;
  }

  friend constexpr Vec4 operator+(Vec4 a, const Vec4& b) noexcept { return a += b; }
  friend constexpr Vec4 operator-(Vec4 a, const Vec4& b) noexcept { return a -= b; }
  friend constexpr Vec4 operator-(const Vec4& a) noexcept { return {-a.x1, -a.x2, -a.x3, -a.x4}; }
  friend constexpr Vec4 operator*(Vec4 a, double s) noexcept { return a *= s; }
  friend constexpr Vec4 operator*(double s, Vec4 a) noexcept { return a *= s; }
  friend constexpr Vec4 operator/(const Vec4& a, double s) noexcept {
    return {a.x1 / s, a.x2 / s, a.x3 / s, a.x4 / s};
  }
  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

/// g0(v, w) = v1 w1 + v2 w2 - v3 w3 - v4 w4.
constexpr double inner(const Vec4& v, const Vec4& w) noexcept {
  return v.x1 * w.x1 + v.x2 * w.x2 - v.x3 * w.x3 - v.x4 * w.x4;
}

inline double norm_inf(const Vec4& v) noexcept {
  return std::max({std::abs(v.x1), std::abs(v.x2), std::abs(v.x3), std::abs(v.x4)});
}

/// Euclidean length; used only for numerical conditioning, never as geometry.
inline double norm_euclid(const Vec4& v) noexcept {
  return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4);
}

inline bool is_finite(const Vec4& v) noexcept {
  return std::isfinite(v.x1) && std::isfinite(v.x2) && std::isfinite(v.x3) &&
         std::isfinite(v.x4);
}

namespace basis {
inline constexpr Vec4 e1{1, 0, 0, 0};
inline constexpr Vec4 e2{0, 1, 0, 0};
inline constexpr Vec4 e3{0, 0, 1, 0};
inline constexpr Vec4 e4{0, 0, 0, 1};
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
/// Null vectors spanning the degenerate rotation axis direction; <xi1, xi2> = -1.
inline constexpr Vec4 xi1{0, kInvSqrt2, kInvSqrt2, 0};
inline constexpr Vec4 xi2{0, -kInvSqrt2, kInvSqrt2, 0};
inline constexpr Vec4 standard[4] = {e1, e2, e3, e4};
}  // namespace basis

enum class CausalClass { Spacelike, Timelike, Lightlike, Zero };

constexpr const char* to_string(CausalClass c) noexcept {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Lightlike: return "lightlike";
    case CausalClass::Zero: return "zero";
  }
  return "?";
}

inline CausalClass causal_character(const Vec4& v, double tol = kCausalTolerance) {
  const double q = inner(v, v);
  if (q > tol) return CausalClass::Spacelike;
  if (q < -tol) return CausalClass::Timelike;
  return norm_inf(v) > tol ? CausalClass::Lightlike : CausalClass::Zero;
}

struct SignedVec {
  Vec4 vec;
  int sign = 1;  // <vec, vec> = sign
};

/// Gram-Schmidt with the indefinite product. Each output is a unit vector with
/// <u_i, u_j> = sign_i delta_ij and the spans of the leading k inputs are kept.
/// Throws DegenerateFrame when a residual is (numerically) lightlike or zero.
inline std::vector<SignedVec> orthonormalize_indefinite(std::span<const Vec4> input,
                                                        double tol = kCausalTolerance) {
  std::vector<SignedVec> out;
  out.reserve(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    const Vec4& v = input[k];
    Vec4 w = v;
    // Two passes; the second removes the round-off left by the first.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out) w -= static_cast<double>(u.sign) * inner(w, u.vec) * u.vec;
    }
    const double q = inner(w, w);
    const double scale = std::max(1.0, norm_inf(v) * norm_inf(v));
    if (!(std::abs(q) > tol * scale)) {
      throw Error(ErrorCode::DegenerateFrame,
                  "lightlike residual in indefinite Gram-Schmidt at vector " +
                      std::to_string(k));
    }
    out.push_back({w / std::sqrt(std::abs(q)), q > 0 ? 1 : -1});
  }
  return out;
}

}  // namespace cmc
