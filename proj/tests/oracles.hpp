#pragma once

#include <cmath>
#include <numbers>

namespace oracle {

// complete elliptic integral K(k) by the arithmetic-geometric mean
inline double elliptic_k(double k) {
  double a = 1.0;
  double b = std::sqrt(1.0 - k * k);
  for (int iter = 0; iter < 40 && a != b; ++iter) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (2.0 * a);
}

// quarter period of a circular pendulum released at angle theta0
inline double circle_quarter_period(double radius, double theta0, double g) {
  return std::sqrt(radius / g) * elliptic_k(std::sin(0.5 * theta0));
}

}  // namespace oracle
