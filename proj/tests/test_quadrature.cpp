#include <gtest/gtest.h>

#include <cmath>

#include "cmc/errors.hpp"
#include "cmc/quadrature.hpp"

using namespace cmc;

TEST(GaussLegendre, ExactForDegree19) {
  auto p = [](double x) { return std::pow(x, 19) - 3 * std::pow(x, 7) + 2; };
  auto P = [](double x) { return std::pow(x, 20) / 20 - 3 * std::pow(x, 8) / 8 + 2 * x; };
  EXPECT_NEAR(gauss_legendre(p, -0.5, 1.2), P(1.2) - P(-0.5), 1e-13);
  EXPECT_NEAR(gauss_legendre(p, 1.2, -0.5), P(-0.5) - P(1.2), 1e-13);
}

TEST(AdaptiveSimpson, Smooth) {
  const double v = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 2.0, 1e-12);
  EXPECT_NEAR(v, std::sqrt(std::acos(-1.0)) / 2 * std::erf(2.0), 1e-11);
}

TEST(AdaptiveSimpson, DepthLimit) {
  EXPECT_THROW(adaptive_simpson([](double x) { return 1.0 / std::sqrt(x + 1e-300); }, 0.0, 1.0,
                                1e-14, 5),
               Error);
}

TEST(ChebyshevPanel, InterpolatesPolynomialExactly) {
  ChebyshevPanel p{0.5, 2.0, {}};
  auto f = [](double x) { return 1 + x - 2 * x * x * x + std::pow(x, 16) / 1000; };
  for (int j = 0; j <= ChebyshevPanel::kDegree; ++j) p.values[j] = f(ChebyshevPanel::node(0.5, 2.0, j));
  for (double x = 0.5; x <= 2.0; x += 0.0371) EXPECT_NEAR(p(x), f(x), 1e-12);
}

TEST(IntegratedTrack, KnownAngleAndCoordinates) {
  // angle' = cos u, angle(0.3) = sin 0.3; coordinates' = (cos angle, u).
  IntegratedTrack t([](double u) { return std::cos(u); },
                    [](double u, double a) { return std::array<double, 2>{std::cos(a), u}; },
                    {-1.0, 3.0}, 0.3, std::sin(0.3), {1.0, 2.0});
  for (double u = -1.0; u <= 3.0; u += 0.173) {
    EXPECT_NEAR(t.angle(u), std::sin(u), 1e-12);
    EXPECT_NEAR(t.coordinates(u)[1], 2.0 + (u * u - 0.09) / 2, 1e-12);
  }
  EXPECT_NEAR(t.coordinates(0.3)[0], 1.0, 1e-15);
  EXPECT_THROW(t.angle(3.5), DomainError);
}

TEST(IntegratedTrack, SmoothEnoughForSecondDifferences) {
  IntegratedTrack t([](double u) { return 1.0 / (1.0 + u * u); },
                    [](double, double a) { return std::array<double, 2>{std::cos(a), std::sin(a)}; },
                    {0.0, 4.0}, 0.0, 0.0, {0.0, 0.0});
  const double h = 1e-4;
  for (double u = 0.01; u < 3.99; u += 0.0713) {
    const double second =
        (t.coordinates(u + h)[0] - 2 * t.coordinates(u)[0] + t.coordinates(u - h)[0]) / (h * h);
    const double a = std::atan(u);
    EXPECT_NEAR(second, -std::sin(a) / (1 + u * u), 1e-5) << u;
  }
}
