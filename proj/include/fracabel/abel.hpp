#pragma once

// Abel integral equation of the first kind,
//
//   psi(a) = int_0^a f(x) (a - x)^(-n) dx,   0 < n < 1,
//
// with a forward operator and two independent inverters, plus a numeric
// Laplace transform used to check the convolution solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "fracabel/error.hpp"
#include "fracabel/fracops.hpp"
#include "fracabel/quadrature.hpp"

namespace fracabel {

class AbelKernel {
public:
  explicit AbelKernel(double n) : n_(n) {
    detail::require(std::isfinite(n) && n > 0.0 && n < 1.0, "abel kernel: exponent n must lie in (0, 1)");
    gamma_factor_ = 1.0 / gamma_fn(1.0 - n);
  }

  double n() const { return n_; }
  /// 1/Gamma(1-n): psi * gamma_factor is the RL-normalized integral I^(1-n) f.
  double gamma_factor() const { return gamma_factor_; }

private:
  double n_;
  double gamma_factor_ = 1.0;
};

struct AbelProblem {
  AbelKernel kernel;
  SampledFunction psi;  // finite at a = 0 by construction
};

/// Density f = ds/dx together with the cumulative curve s(x), s(0) = 0.
struct AbelSolution {
  SampledFunction density;
  SampledFunction cumulative;
};

/// psi(a_i) = int_0^{a_i} f(x) (a_i - x)^(-n) dx by the product rule.
inline SampledFunction forward(const SampledFunction& f, const AbelKernel& kernel) {
  const auto table = build_weights(f.grid(), 1.0 - kernel.n());
  return SampledFunction(f.grid(), table.apply(f.values()));
}

namespace detail {

inline constexpr std::size_t kRemarkablePanelPoints = 8;
inline constexpr std::size_t kRemarkableEndPanelPoints = 24;

}  // namespace detail

/// Closed-form inversion returning the cumulative s(x):
///
///   s(x) = sin(n pi)/pi * x^n * int_0^1 psi(x t) (1 - t)^(n-1) dt.
///
/// With t = 1 - u^(1/n) the weight (1-t)^(n-1) dt becomes du/n, so the
/// integral is (1/n) int_0^1 psi(x (1 - u^(1/n))) du with a bounded
/// integrand. psi is linear between nodes, so the u-range is split at the
/// images of the grid nodes and each piece gets its own Gauss rule.
inline SampledFunction invert_remarkable(const AbelProblem& problem) {
  const double n = problem.kernel.n();
  const SampledFunction& psi = problem.psi;
  const Grid& grid = psi.grid();
  const auto values = psi.values();
  const GaussRule inner = gauss_legendre(detail::kRemarkablePanelPoints);
  const GaussRule end = gauss_legendre(detail::kRemarkableEndPanelPoints);
  const double prefactor = std::sin(n * std::numbers::pi) / std::numbers::pi / n;
  const double inv_n = 1.0 / n;

  std::vector<double> s(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto id = static_cast<double>(i);
    double integral = 0.0;
    // node j sits at t_j = j/i, i.e. u_j = (1 - j/i)^n; piece j spans [u_{j+1}, u_j]
    for (std::size_t j = 0; j < i; ++j) {
      const double u_hi = std::pow(1.0 - static_cast<double>(j) / id, n);
      const double u_lo = j + 1 == i ? 0.0 : std::pow(1.0 - static_cast<double>(j + 1) / id, n);
      const GaussRule& ref = j + 1 == i ? end : inner;
      const double mid = 0.5 * (u_hi + u_lo);
      const double half = 0.5 * (u_hi - u_lo);
      double piece = 0.0;
      for (std::size_t q = 0; q < ref.size(); ++q) {
        const double u = mid + half * ref.nodes[q];
        const double t = 1.0 - std::pow(u, inv_n);
        // position inside cell j in units of h, clamped against roundoff
        const double lambda = std::clamp(id * t - static_cast<double>(j), 0.0, 1.0);
        piece += ref.weights[q] * ((1.0 - lambda) * values[j] + lambda * values[j + 1]);
      }
      integral += half * piece;
    }
    s[i] = prefactor * std::pow(grid.x(i), n) * integral;
  }
  return SampledFunction(grid, std::move(s));
}

/// invert_remarkable together with its differentiated density.
inline AbelSolution invert_remarkable_solution(const AbelProblem& problem) {
  SampledFunction s = invert_remarkable(problem);
  SampledFunction f = differentiate(s);
  return {std::move(f), std::move(s)};
}

/// Fractional-derivative inversion.
///
/// psi = Gamma(1-n) I^(1-n) f, hence f = D^(1-n) [psi / Gamma(1-n)]. The
/// constant part psi(0) is differentiated with the Lacroix monomial rule
/// (it is singular like x^(n-1)); the remainder, which vanishes at the
/// origin, goes through the numerical RL derivative. The cumulative is
/// s = I^n psi / Gamma(1-n).
inline AbelSolution invert_fractional_solution(const AbelProblem& problem) {
  const AbelKernel& kernel = problem.kernel;
  const Grid& grid = problem.psi.grid();
  const double gf = kernel.gamma_factor();
  const double psi0 = problem.psi.left_value();
  const FracOrder order(1.0 - kernel.n());

  std::vector<double> remainder(problem.psi.values().begin(), problem.psi.values().end());
  for (double& v : remainder) v = gf * (v - psi0);
  const SampledFunction smooth_part = rl_derivative(SampledFunction(grid, std::move(remainder)), order);

  const SampledFunction integral = rl_integral(problem.psi, FracOrder(kernel.n()));
  std::vector<double> s(integral.values().begin(), integral.values().end());
  for (double& v : s) v *= gf;

  std::vector<double> f(smooth_part.values().begin(), smooth_part.values().end());
  if (psi0 != 0.0) {
    const MonomialDerivativeRule constant_rule{MonomialDerivativeRule::Variant::lacroix, 0.0, order.alpha()};
    for (std::size_t i = 1; i < f.size(); ++i) f[i] += gf * psi0 * monomial_closed_form(constant_rule, grid.x(i));
    // the density is unbounded at 0; keep the first cell's trapezoid mass equal to s(x_1)
    f[0] = 2.0 * s[1] / grid.h() - f[1];
  }
  return {SampledFunction(grid, std::move(f)), SampledFunction(grid, std::move(s))};
}

/// Density part of invert_fractional_solution.
inline SampledFunction invert_fractional(const AbelProblem& problem) {
  return invert_fractional_solution(problem).density;
}

// ---------------------------------------------------------------------------
// Laplace transform oracle
// ---------------------------------------------------------------------------

/// Declared analytic behaviour c * t^p of the sampled function.
struct PowerLaw {
  double coefficient = 0.0;
  double exponent = 0.0;
};

/// What the function does beyond the last grid node.
struct LaplaceTail {
  enum class Kind { vanishes, power_law };
  Kind kind = Kind::vanishes;
  PowerLaw law;

  static LaplaceTail vanishing() { return {}; }
  static LaplaceTail power(double coefficient, double exponent) {
    return {Kind::power_law, {coefficient, exponent}};
  }
};

/// Optional replacement of the samples on [0, x_k] by c * t^p (p > -1),
/// for functions that are singular at the origin.
struct LaplaceHead {
  std::size_t nodes = 0;  // k; 0 means no replacement
  PowerLaw law;
};

struct LaplaceResult {
  double value = 0.0;      // head + panels + tail
  double head = 0.0;
  double panel_sum = 0.0;
  double tail = 0.0;
  bool tail_dominant = false;  // |tail| > 1% of |panel_sum|
};

namespace detail {

inline constexpr std::size_t kLaplacePanelPoints = 6;

// int_X^inf c t^p e^{-st} dt, by Gauss panels on a truncated range
inline double power_law_tail(const PowerLaw& law, double x_start, double s) {
  if (law.coefficient == 0.0) return 0.0;
  const GaussRule ref = gauss_legendre(16);
  const double span = 60.0 / s + 2.0 * std::abs(law.exponent) / s;
  const std::size_t panels = 32;
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = x_start + span * static_cast<double>(k) / panels;
    const double b = x_start + span * static_cast<double>(k + 1) / panels;
    sum += remap(ref, a, b).integrate([&](double t) { return std::pow(t, law.exponent) * std::exp(-s * t); });
  }
  return law.coefficient * sum;
}

// int_0^L c t^p e^{-st} dt with t = L w^{1/(p+1)}, which absorbs t^p dt
inline double power_law_head(const PowerLaw& law, double length, double s) {
  const double p1 = law.exponent + 1.0;
  const GaussRule rule = gauss_legendre(32, 0.0, 1.0);
  const double integral = rule.integrate([&](double w) { return std::exp(-s * length * std::pow(w, 1.0 / p1)); });
  return law.coefficient * std::pow(length, p1) / p1 * integral;
}

}  // namespace detail

/// Laplace transform int_0^inf e^{-st} f(t) dt of a sampled f, using Gauss
/// panels over the piecewise-linear interpolant and the declared analytic
/// head and tail.
inline LaplaceResult laplace_numeric(const SampledFunction& f, double s, const LaplaceTail& tail,
                                     const LaplaceHead& head = {}) {
  detail::require(std::isfinite(s) && s > 0.0, "laplace_numeric: s must be positive");
  const Grid& grid = f.grid();
  detail::require(head.nodes < grid.size(), "laplace_numeric: head covers the whole grid");
  if (head.nodes > 0) {
    detail::require(head.law.exponent > -1.0, "laplace_numeric: head exponent must exceed -1");
  }

  LaplaceResult result;
  if (head.nodes > 0) result.head = detail::power_law_head(head.law, grid.x(head.nodes), s);

  const GaussRule ref = gauss_legendre(detail::kLaplacePanelPoints);
  const double h = grid.h();
  for (std::size_t j = head.nodes; j + 1 < grid.size(); ++j) {
    const double a = grid.x(j);
    const double fa = f[j];
    const double fb = f[j + 1];
    double piece = 0.0;
    for (std::size_t q = 0; q < ref.size(); ++q) {
      const double lambda = 0.5 * (ref.nodes[q] + 1.0);
      const double t = a + lambda * h;
      piece += ref.weights[q] * std::exp(-s * t) * ((1.0 - lambda) * fa + lambda * fb);
    }
    result.panel_sum += 0.5 * h * piece;
  }

  if (tail.kind == LaplaceTail::Kind::power_law) {
    result.tail = detail::power_law_tail(tail.law, grid.x_max(), s);
  }
  result.value = result.head + result.panel_sum + result.tail;
  result.tail_dominant = std::abs(result.tail) > 0.01 * std::abs(result.panel_sum);
  return result;
}

}  // namespace fracabel
