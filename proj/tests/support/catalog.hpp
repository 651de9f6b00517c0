#pragma once

// Arc-length generating curves with closed-form components, used as test
// fixtures for the closed-form vs oracle comparisons.

#include <array>
#include <string>
#include <vector>

#include "cmc/curve.hpp"

namespace cmc::fixtures {

struct CatalogCurve {
  std::string name;
  RotationType type;
  std::array<std::string, 3> components;
  Interval domain;
  bool degenerate = false;

  GeneratingCurve curve() const {
    return analytic_curve(type, {components[0], components[1], components[2]}, {}, domain);
  }
};

inline std::vector<CatalogCurve> elliptic_catalog() {
  return {
      {"circle r=1", RotationType::Elliptic, {"cos(u)", "sin(u)", "1"}, {0.0, 6.0}},
      {"circle r=2", RotationType::Elliptic, {"cos(u)", "sin(u)", "2"}, {0.0, 6.0}},
      {"double-speed circle r=3", RotationType::Elliptic, {"sin(2*u)/2", "-cos(2*u)/2", "3"}, {0.0, 3.0}},
      {"cone r=2+u/2", RotationType::Elliptic,
       {"sqrt(1.25)*sin(u)", "-sqrt(1.25)*cos(u)", "2+u/2"}, {0.0, 4.0}},
      {"catenoid-like r=cosh(u)", RotationType::Elliptic,
       {"(sinh(u)*cos(u)+cosh(u)*sin(u))/2", "(sinh(u)*sin(u)-cosh(u)*cos(u))/2", "cosh(u)"},
       {-1.0, 1.5}},
      {"straight line", RotationType::Elliptic, {"0.6*u", "sqrt(0.64+0.25)*u", "1+0.5*u"},
       {0.0, 2.0}, true},
  };
}

inline std::vector<CatalogCurve> hyperbolic_catalog() {
  return {
      {"A r=2u", RotationType::HyperbolicA, {"2*u", "sqrt(3)*cosh(u)", "sqrt(3)*sinh(u)"}, {0.5, 2.0}},
      {"A r=sqrt(2)u+1", RotationType::HyperbolicA, {"sqrt(2)*u+1", "cosh(2*u)/2", "sinh(2*u)/2"},
       {0.0, 1.5}},
      {"B r=2+u/2", RotationType::HyperbolicB,
       {"2+u/2", "sqrt(3)/2*sinh(u)", "sqrt(3)/2*cosh(u)"}, {-1.0, 1.5}},
      {"B r=1", RotationType::HyperbolicB, {"1", "sinh(u)", "cosh(u)"}, {-1.5, 1.5}},
      {"B r=sin(u)", RotationType::HyperbolicB,
       {"sin(u)", "(sinh(u)*sin(u)-cosh(u)*cos(u))/2", "(cosh(u)*sin(u)-sinh(u)*cos(u))/2"},
       {0.5, 2.5}},
  };
}

inline std::vector<CatalogCurve> parabolic_catalog() {
  return {
      {"cubic g", RotationType::Parabolic, {"u^2/2", "u", "u^3/6-u/2"}, {0.5, 2.0}},
      {"sine", RotationType::Parabolic, {"sin(u)", "u", "-(u-sin(u)*cos(u))/4"}, {0.5, 2.5}},
      {"exponential", RotationType::Parabolic, {"2*u", "exp(u)", "-1.5*exp(-u)"}, {-1.0, 1.0}},
      {"quadratic f", RotationType::Parabolic, {"u", "u^2", "0"}, {0.5, 2.0}},
      {"hyperbolic cosine", RotationType::Parabolic,
       {"cosh(u)", "u", "(sinh(u)*cosh(u)-3*u)/4"}, {0.5, 2.0}},
      {"straight", RotationType::Parabolic, {"u", "u", "0"}, {0.5, 2.0}, true},
  };
}

inline std::vector<CatalogCurve> full_catalog() {
  std::vector<CatalogCurve> all = elliptic_catalog();
  for (auto& c : hyperbolic_catalog()) all.push_back(c);
  for (auto& c : parabolic_catalog()) all.push_back(c);
  return all;
}

}  // namespace cmc::fixtures
