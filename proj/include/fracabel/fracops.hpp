#pragma once

// Riemann-Liouville fractional integral and derivative, Caputo derivative,
// and the closed-form monomial rules used as ground truth for them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracabel/error.hpp"
#include "fracabel/quadrature.hpp"

namespace fracabel {

/// Validated fractional order alpha > 0 together with ceil(alpha).
class FracOrder {
public:
  explicit FracOrder(double alpha) : alpha_(alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "order: alpha must be finite and positive");
    ceil_ = static_cast<int>(std::ceil(alpha));
  }

  double alpha() const { return alpha_; }
  int ceil_alpha() const { return ceil_; }
  bool is_integer() const { return static_cast<double>(ceil_) == alpha_; }
  bool in_unit_interval() const { return alpha_ < 1.0; }  // (0, 1)

private:
  double alpha_;
  int ceil_ = 1;
};

/// Real function sampled on a uniform grid.
class SampledFunction {
public:
  SampledFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    detail::require(values_.size() == grid_.size(), "sampled function: value count does not match grid");
    for (double v : values_) detail::require(std::isfinite(v), "sampled function: values must be finite");
  }

  template <class F>
  static SampledFunction sample(const Grid& grid, F&& f) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.x(i));
    return SampledFunction(grid, std::move(values));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  double left_value() const { return values_.front(); }
  double x(std::size_t i) const { return grid_.x(i); }

private:
  Grid grid_;
  std::vector<double> values_;
};

/// First node whose operator output is contract-bearing.
///
/// Derivatives of functions with f(0) != 0 behave like x^(-alpha) at the
/// origin, and the difference stencil cannot resolve that within the first
/// few cells. The excluded band is a fixed fraction of the domain so that
/// its physical width does not shrink under refinement.
inline constexpr double kBoundaryLayerFraction = 0.05;

inline std::size_t first_contract_node(const Grid& grid) {
  const auto band = static_cast<std::size_t>(
      std::ceil(kBoundaryLayerFraction * static_cast<double>(grid.size() - 1)));
  return std::max<std::size_t>(2, band);
}

/// Derivative by 3-point differences: centered inside, one-sided at both ends.
inline SampledFunction differentiate(const SampledFunction& f) {
  const std::size_t n = f.size();
  detail::require(n >= 3, "differentiate: need at least 3 nodes");
  const double h = f.grid().h();
  const auto v = f.values();
  std::vector<double> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return SampledFunction(f.grid(), std::move(d));
}

/// Cumulative trapezoid, the alpha = 1 member of the integral family.
inline SampledFunction cumulative_integral(const SampledFunction& f) {
  const double h = f.grid().h();
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return SampledFunction(f.grid(), std::move(out));
}

namespace detail {

inline void require_table_matches(const SingularWeightTable& table, const Grid& grid, double alpha) {
  require(table.grid() == grid, "weight table was built for a different grid");
  require(table.alpha() == alpha, "weight table was built for a different order");
}

inline SampledFunction scaled(const Grid& grid, std::vector<double> values, double factor) {
  for (double& v : values) v *= factor;
  return SampledFunction(grid, std::move(values));
}

}  // namespace detail

/// Riemann-Liouville integral I^alpha f with a precomputed kernel table.
inline SampledFunction rl_integral(const SampledFunction& f, FracOrder order,
                                   const SingularWeightTable& table) {
  detail::require(order.alpha() < 1.0, "rl_integral: a weight table only serves orders in (0, 1)");
  detail::require_table_matches(table, f.grid(), order.alpha());
  return detail::scaled(f.grid(), table.apply(f.values()), 1.0 / gamma_fn(order.alpha()));
}

/// Riemann-Liouville integral I^alpha f, 0 < alpha <= 1.
inline SampledFunction rl_integral(const SampledFunction& f, FracOrder order) {
  detail::require(order.alpha() <= 1.0, "rl_integral: order must lie in (0, 1]");
  if (order.alpha() == 1.0) return cumulative_integral(f);
  return rl_integral(f, order, build_weights(f.grid(), order.alpha()));
}

namespace detail {

inline void require_derivative_args(const SampledFunction& f, FracOrder order, const char* op) {
  require(order.in_unit_interval(), std::string(op) + ": order must lie in (0, 1)");
  require(f.size() >= 5, std::string(op) + ": need at least 5 grid nodes");
}

}  // namespace detail

/// D^alpha f = d/dx I^(1-alpha) f; `table` must be built for 1 - alpha.
inline SampledFunction rl_derivative(const SampledFunction& f, FracOrder order,
                                     const SingularWeightTable& complement_table) {
  detail::require_derivative_args(f, order, "rl_derivative");
  return differentiate(rl_integral(f, FracOrder(1.0 - order.alpha()), complement_table));
}

/// Riemann-Liouville derivative D^alpha f, 0 < alpha < 1.
inline SampledFunction rl_derivative(const SampledFunction& f, FracOrder order) {
  detail::require_derivative_args(f, order, "rl_derivative");
  return differentiate(rl_integral(f, FracOrder(1.0 - order.alpha())));
}

/// Caputo derivative as I^(1-alpha) applied to a differenced f'.
inline SampledFunction caputo_derivative(const SampledFunction& f, FracOrder order,
                                         const SingularWeightTable& complement_table) {
  detail::require_derivative_args(f, order, "caputo_derivative");
  return rl_integral(differentiate(f), FracOrder(1.0 - order.alpha()), complement_table);
}

inline SampledFunction caputo_derivative(const SampledFunction& f, FracOrder order) {
  detail::require_derivative_args(f, order, "caputo_derivative");
  return rl_integral(differentiate(f), FracOrder(1.0 - order.alpha()));
}

/// Caputo derivative through D^alpha [f - f(0)]; the cross-check route.
inline SampledFunction caputo_via_rl(const SampledFunction& f, FracOrder order) {
  detail::require_derivative_args(f, order, "caputo_via_rl");
  std::vector<double> shifted(f.values().begin(), f.values().end());
  const double f0 = f.left_value();
  for (double& v : shifted) v -= f0;
  return rl_derivative(SampledFunction(f.grid(), std::move(shifted)), order);
}

// ---------------------------------------------------------------------------
// Monomial rules
// ---------------------------------------------------------------------------

struct MonomialDerivativeRule {
  enum class Variant { lacroix, leibniz };
  Variant variant = Variant::lacroix;
  double m = 1.0;      // exponent of x^m
  double order = 0.5;  // in (0, 1]
};

/// d^order/dx^order x^m in closed form.
///
/// Lacroix: Gamma(m+1)/Gamma(m-order+1) x^(m-order).
/// Leibniz (m = 1 only): x^(1-order), i.e. the same power without the
/// gamma-ratio coefficient.
inline double monomial_closed_form(const MonomialDerivativeRule& rule, double x) {
  detail::require(std::isfinite(x) && x > 0.0, "monomial_closed_form: x must be positive");
  detail::require(rule.order > 0.0 && rule.order <= 1.0, "monomial_closed_form: order must lie in (0, 1]");
  switch (rule.variant) {
    case MonomialDerivativeRule::Variant::lacroix: {
      detail::require(rule.m >= 0.0 && rule.m - rule.order + 1.0 > 0.0,
                      "monomial_closed_form: lacroix needs m >= 0 and m - order + 1 > 0");
      return gamma_fn(rule.m + 1.0) / gamma_fn(rule.m - rule.order + 1.0) * std::pow(x, rule.m - rule.order);
    }
    case MonomialDerivativeRule::Variant::leibniz:
      detail::require(rule.m == 1.0, "monomial_closed_form: leibniz rule is only stated for m = 1");
      return std::pow(x, 1.0 - rule.order);
  }
  throw DomainError("monomial_closed_form: unknown variant");
}

// ---------------------------------------------------------------------------
// Left-inverse check
// ---------------------------------------------------------------------------

struct ResidualReport {
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t nodes = 0;
};

/// max and RMS of |a - b| over the contract-bearing nodes.
inline ResidualReport interior_residual(const SampledFunction& a, const SampledFunction& b) {
  detail::require(a.grid() == b.grid(), "residual: grids differ");
  ResidualReport report;
  double sum_sq = 0.0;
  for (std::size_t i = first_contract_node(a.grid()); i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    report.max_abs = std::max(report.max_abs, d);
    sum_sq += d * d;
    ++report.nodes;
  }
  if (report.nodes > 0) report.rms = std::sqrt(sum_sq / static_cast<double>(report.nodes));
  return report;
}

/// Residual of D^alpha I^alpha f against f.
inline ResidualReport fractional_identity_check(const SampledFunction& f, FracOrder order) {
  detail::require_derivative_args(f, order, "fractional_identity_check");
  return interior_residual(rl_derivative(rl_integral(f, order), order), f);
}

}  // namespace fracabel
