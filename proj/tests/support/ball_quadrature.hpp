#pragma once

// Deterministic radial-angular product rule for ∫_{|P|≤Λ} d^DP/(2π)^D f(P).

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double ball_integral(int D, double Lambda, const std::function<double(const std::vector<double>&)>& f) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> ang(D - 1);
  // hyperspherical angles φ_1..φ_{D-2} ∈ [0,π], φ_{D-1} ∈ [0,2π)
  std::function<double(int, double)> angles = [&](int j, double r) -> double {
    if (j == D - 1) {
      std::vector<double> p(D);
      double s = r;
      for (int i = 0; i < D - 1; ++i) {
        p[i] = s * std::cos(ang[i]);
        s *= std::sin(ang[i]);
      }
      p[D - 1] = s;
      double jac = 1;
      for (int i = 0; i < D - 2; ++i) jac *= std::pow(std::sin(ang[i]), D - 2 - i);
      return jac * f(p);
    }
    double hi = j == D - 2 ? 2 * M_PI : M_PI;
    return Rule::integrate([&](double t) { ang[j] = t; return angles(j + 1, r); }, 0.0, hi);
  };
  double v;
  if (D == 1) {
    v = Rule::integrate([&](double x) { return f({x}); }, -Lambda, Lambda);
  } else {
    v = Rule::integrate([&](double r) { return std::pow(r, D - 1) * angles(0, r); }, 0.0, Lambda);
  }
  return v / std::pow(2 * M_PI, D);
}

}  // namespace oracle
