#pragma once

// Numerical kernel: gamma function, Gauss-Legendre rules, and
// product-trapezoidal weights for the weakly singular kernel
// (x - t)^(alpha - 1) on a uniform grid.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fracabel/error.hpp"

namespace fracabel {

/// Uniform grid x_i = i*h on [0, x_max] with n >= 2 nodes.
class Grid {
public:
  Grid(double x_max, std::size_t n) : x_max_(x_max), n_(n) {
    detail::require(std::isfinite(x_max) && x_max > 0.0, "grid: x_max must be finite and positive");
    detail::require(n >= 2, "grid: need at least 2 nodes");
  }

  /// Rebuilds a grid from explicit node positions; they must start at 0 and be uniform.
  static Grid from_nodes(std::span<const double> xs) {
    detail::require(xs.size() >= 2, "grid: need at least 2 nodes");
    detail::require(xs.front() == 0.0, "grid: first node must be exactly 0");
    const double x_max = xs.back();
    detail::require(std::isfinite(x_max) && x_max > 0.0, "grid: nodes must increase from 0");
    const Grid grid(x_max, xs.size());
    const double tol = 1e-9 * x_max;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      detail::require(std::abs(xs[i] - grid.x(i)) <= tol,
                      "grid: nodes are not uniformly spaced (node " + std::to_string(i) + ")");
    }
    return grid;
  }

  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double h() const { return x_max_ / static_cast<double>(n_ - 1); }
  double x(std::size_t i) const {
    return i + 1 == n_ ? x_max_ : static_cast<double>(i) * h();
  }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  double x_max_;
  std::size_t n_;
};

// ---------------------------------------------------------------------------
// Gamma function
// ---------------------------------------------------------------------------

namespace detail {

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficient set).
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosCoeffs[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_gamma(double z) {
  // valid for z >= 0.5
  const double zm1 = z - 1.0;
  double sum = kLanczosCoeffs[0];
  for (int k = 1; k < 9; ++k) sum += kLanczosCoeffs[k] / (zm1 + k);
  const double t = zm1 + kLanczosG + 0.5;
  // split the power so t^(z-1/2) does not overflow before exp(-t) pulls it down
  const double half_power = std::pow(t, 0.5 * (zm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * sum;
}

}  // namespace detail

/// Gamma function for real z > 0.
inline double gamma_fn(double z) {
  detail::require(std::isfinite(z) && z > 0.0, "gamma_fn: argument must be finite and positive");
  if (z < 0.5) return detail::lanczos_gamma(z + 1.0) / z;
  return detail::lanczos_gamma(z);
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule mapped onto [a, b]; nodes ascending.
inline GaussRule gauss_legendre(std::size_t n_points, double a = -1.0, double b = 1.0) {
  detail::require(n_points >= 1, "gauss_legendre: need at least one point");
  detail::require(std::isfinite(a) && std::isfinite(b) && a < b, "gauss_legendre: need a < b");

  GaussRule rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n_points + 1) / 2;
  const auto n = static_cast<double>(n_points);

  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= n_points; ++j) {
        const double p2 = p1;
        p1 = p0;
        const auto jd = static_cast<double>(j);
        p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n_points - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n_points - 1 - i] = half * w;
  }
  return rule;
}

/// Maps a rule on [-1, 1] onto [a, b] without recomputing nodes.
inline GaussRule remap(const GaussRule& reference, double a, double b) {
  GaussRule out = reference;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.nodes[k] = mid + half * reference.nodes[k];
    out.weights[k] = half * reference.weights[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product-trapezoidal weights
// ---------------------------------------------------------------------------

/// Weights w(i, j) with sum_j w(i, j) f(x_j) equal to the exact integral of
/// the piecewise-linear interpolant of f against (x_i - t)^(alpha - 1) on [0, x_i].
///
/// The rule is Toeplitz apart from the end nodes: subinterval k (counted
/// backwards from the target) contributes far(k) to its left node and
/// near(k) to its right node, so only O(n) coefficients are stored.
class SingularWeightTable {
public:
  SingularWeightTable(Grid grid, double alpha, std::vector<double> far, std::vector<double> near)
      : grid_(grid), alpha_(alpha), far_(std::move(far)), near_(std::move(near)) {
    detail::require(far_.size() + 1 == grid_.size() && near_.size() + 1 == grid_.size(),
                    "weight table: coefficient count must be n - 1");
  }

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  std::span<const double> far_coefficients() const { return far_; }
  std::span<const double> near_coefficients() const { return near_; }

  double weight(std::size_t i, std::size_t j) const {
    if (j > i || i == 0) return 0.0;
    double w = 0.0;
    if (j < i) w += far_[i - j - 1];
    if (j > 0) w += near_[i - j];
    return w;
  }

  /// Row i as a dense vector of length i + 1.
  std::vector<double> row(std::size_t i) const {
    std::vector<double> r(i + 1);
    for (std::size_t j = 0; j <= i; ++j) r[j] = weight(i, j);
    return r;
  }

  double apply_row(std::size_t i, std::span<const double> f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < i; ++k) sum += far_[k] * f[i - k - 1] + near_[k] * f[i - k];
    return sum;
  }

  /// Weighted sums for every row; entry 0 is 0.
  std::vector<double> apply(std::span<const double> f) const {
    detail::require(f.size() == grid_.size(), "weight table: sample count does not match grid");
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = apply_row(i, f);
    return out;
  }

private:
  Grid grid_;
  double alpha_;
  std::vector<double> far_;
  std::vector<double> near_;
};

namespace detail {

// (k+1)^p - k^p without cancellation for large k
inline double forward_power_difference(double k, double p) {
  if (k == 0.0) return 1.0;
  return std::pow(k, p) * std::expm1(p * std::log1p(1.0 / k));
}

/// Product-trapezoidal weights for any kernel exponent alpha > 0.
inline SingularWeightTable product_weights(const Grid& grid, double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, "product weights: alpha must be positive");
  const std::size_t m = grid.size() - 1;
  const double scale = std::pow(grid.h(), alpha);
  std::vector<double> far(m);
  std::vector<double> near(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto kd = static_cast<double>(k);
    const double p = forward_power_difference(kd, alpha);        // (k+1)^a - k^a
    const double q = forward_power_difference(kd, alpha + 1.0);  // (k+1)^(a+1) - k^(a+1)
    const double a_k = q / (alpha + 1.0) - kd * p / alpha;
    far[k] = scale * a_k;
    near[k] = scale * (p / alpha - a_k);
  }
  return SingularWeightTable(grid, alpha, std::move(far), std::move(near));
}

}  // namespace detail

/// Weight table for (x - t)^(alpha - 1), 0 < alpha < 1.
inline SingularWeightTable build_weights(const Grid& grid, double alpha) {
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
                  "build_weights: alpha must lie in (0, 1)");
  return detail::product_weights(grid, alpha);
}

}  // namespace fracabel
