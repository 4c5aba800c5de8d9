#pragma once

// End-to-end property checks, one per acceptance property. Used by the
// `verify` subcommand and the acceptance test binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fracabel/abel.hpp"
#include "fracabel/curve.hpp"
#include "fracabel/dynamics.hpp"
#include "fracabel/fracops.hpp"
#include "fracabel/quadrature.hpp"
#include "fracabel/tautochrone.hpp"

namespace fracabel {

struct VerifyOptions {
  bool quick = false;         // coarser grids, same properties
  double weight_fault = 0.0;  // relative corruption of the far weight coefficients
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline std::string format_check(const CheckResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s [%2d] %-24s measured=%.3e tol=%.3e", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.measured, r.tolerance);
  std::string line = head;
  if (!r.detail.empty()) line += "  " + r.detail;
  return line;
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// weight tables for the fractional operators, optionally corrupted
struct WeightSource {
  double fault = 0.0;

  SingularWeightTable operator()(const Grid& grid, double alpha) const {
    SingularWeightTable clean = build_weights(grid, alpha);
    if (fault == 0.0) return clean;
    std::vector<double> far(clean.far_coefficients().begin(), clean.far_coefficients().end());
    std::vector<double> near(clean.near_coefficients().begin(), clean.near_coefficients().end());
    for (double& w : far) w *= 1.0 + fault;
    return SingularWeightTable(grid, alpha, std::move(far), std::move(near));
  }
};

inline std::size_t fine_n(const VerifyOptions& o) { return o.quick ? 257 : 513; }

inline std::vector<std::size_t> ladder(const VerifyOptions& o) {
  return o.quick ? std::vector<std::size_t>{65, 129, 257} : std::vector<std::size_t>{129, 257, 513};
}

// max |a/b - 1| over the contract-bearing nodes
inline double interior_relative(const SampledFunction& a, const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t i = first_contract_node(a.grid()); i < a.size(); ++i) {
    const double e = exact(a.x(i));
    worst = std::max(worst, std::abs(a[i] - e) / std::abs(e));
  }
  return worst;
}

inline double interior_relative(const SampledFunction& a, const SampledFunction& b) {
  double worst = 0.0;
  for (std::size_t i = first_contract_node(a.grid()); i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return worst;
}

inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  return (*hi - *lo) / mean;
}

inline const std::vector<double>& release_heights() {
  static const std::vector<double> h{0.1, 0.5, 1.0, 1.5, 1.9};
  return h;
}

inline double arrival(const Curve& curve, double y0, double g, double dt, bool check_step = true) {
  SimConfig config{curve, y0, g, dt};
  config.trace_stride = 1u << 30;
  config.check_step = check_step;
  const SimResult run = simulate(config);
  if (!run.arrival_time) throw NumericalError("verify: bead did not arrive");
  return *run.arrival_time;
}

}  // namespace detail

// 1. D^(1/2) x = 2 sqrt(x/pi) and D^(1/2) 1 = 1/sqrt(pi x).
inline CheckResult check_lacroix_values(const VerifyOptions& o = {}) {
  const detail::WeightSource weights{o.weight_fault};
  const Grid grid(1.0, detail::fine_n(o));
  const FracOrder half(0.5);
  const auto table = weights(grid, 0.5);
  const auto dx = rl_derivative(SampledFunction::sample(grid, [](double x) { return x; }), half, table);
  const auto d1 = rl_derivative(SampledFunction::sample(grid, [](double) { return 1.0; }), half, table);
  using Rule = MonomialDerivativeRule;
  const Rule rule_x{Rule::Variant::lacroix, 1.0, 0.5};
  const Rule rule_1{Rule::Variant::lacroix, 0.0, 0.5};
  const double err_x = detail::interior_relative(dx, [&](double x) { return monomial_closed_form(rule_x, x); });
  const double err_1 = detail::interior_relative(d1, [&](double x) { return monomial_closed_form(rule_1, x); });
  const double closed = std::max(std::abs(monomial_closed_form(rule_x, 1.0) - 2.0 * std::numbers::inv_sqrtpi),
                                 std::abs(monomial_closed_form(rule_1, 1.0) - std::numbers::inv_sqrtpi));
  CheckResult r{1, "lacroix_values", false, std::max(err_x, err_1), 5e-3, ""};
  r.passed = r.measured <= r.tolerance && closed <= 1e-12;
  r.detail = "D^0.5 x(1)=" + detail::sci(dx[dx.size() - 1]) + " D^0.5 1(1)=" + detail::sci(d1[d1.size() - 1]) +
             " closed_form_err=" + detail::sci(closed);
  return r;
}

// 2. D^a I^a f = f, with the residual shrinking under refinement.
inline CheckResult check_left_inverse(const VerifyOptions& o = {}) {
  const detail::WeightSource weights{o.weight_fault};
  const std::vector<std::function<double(double)>> fs{[](double x) { return x; },
                                                      [](double x) { return std::sin(x); }};
  CheckResult r{2, "left_inverse_identity", true, 0.0, 5e-3, ""};
  bool monotone = true;
  for (const auto& f : fs) {
    for (double alpha : {0.3, 0.5, 0.7}) {
      double previous = INFINITY;
      for (std::size_t n : detail::ladder(o)) {
        const Grid grid(1.0, n);
        const auto fn = SampledFunction::sample(grid, f);
        const auto lifted = rl_integral(fn, FracOrder(alpha), weights(grid, alpha));
        const auto back = rl_derivative(lifted, FracOrder(alpha), weights(grid, 1.0 - alpha));
        const double res = interior_residual(back, fn).max_abs;
        monotone = monotone && res < previous;
        previous = res;
        if (n == detail::ladder(o).back()) r.measured = std::max(r.measured, res);
      }
    }
  }
  r.passed = r.measured <= r.tolerance && monotone;
  r.detail = std::string("monotone=") + (monotone ? "yes" : "no");
  return r;
}

// 3. I^a I^b = I^(a+b).
inline CheckResult check_semigroup(const VerifyOptions& o = {}) {
  const detail::WeightSource weights{o.weight_fault};
  const std::vector<std::function<double(double)>> fs{[](double x) { return x; },
                                                      [](double x) { return std::sin(x); }};
  CheckResult r{3, "semigroup", true, 0.0, 5e-3, ""};
  bool monotone = true;
  for (const auto& f : fs) {
    for (auto [a, b] : {std::pair{0.3, 0.3}, std::pair{0.25, 0.5}}) {
      double previous = INFINITY;
      for (std::size_t n : detail::ladder(o)) {
        const Grid grid(1.0, n);
        const auto fn = SampledFunction::sample(grid, f);
        const auto nested = rl_integral(rl_integral(fn, FracOrder(b), weights(grid, b)), FracOrder(a), weights(grid, a));
        const auto direct = rl_integral(fn, FracOrder(a + b), weights(grid, a + b));
        const double res = interior_residual(nested, direct).max_abs;
        monotone = monotone && res < previous;
        previous = res;
        if (n == detail::ladder(o).back()) r.measured = std::max(r.measured, res);
      }
    }
  }
  r.passed = r.measured <= r.tolerance && monotone;
  r.detail = std::string("monotone=") + (monotone ? "yes" : "no");
  return r;
}

// 4. Caputo f = D^a f - f(0) x^(-a) / Gamma(1-a).
inline CheckResult check_caputo_rl(const VerifyOptions& o = {}) {
  const detail::WeightSource weights{o.weight_fault};
  const Grid grid(1.0, detail::fine_n(o));
  const FracOrder half(0.5);
  const auto table = weights(grid, 0.5);
  const auto f = SampledFunction::sample(grid, [](double x) { return 1.0 + x * x; });
  const auto caputo = caputo_derivative(f, half, table);
  const auto rl = rl_derivative(f, half, table);
  const double c = f.left_value() / gamma_fn(0.5);
  double worst = 0.0;
  for (std::size_t i = first_contract_node(grid); i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(caputo[i] + c / std::sqrt(grid.x(i)) - rl[i]));
  }
  const auto line = SampledFunction::sample(grid, [](double x) { return x; });
  const auto via = caputo_via_rl(line, half);
  const auto direct = rl_derivative(line, half);
  double exact_path = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) exact_path = std::max(exact_path, std::abs(via[i] - direct[i]));
  CheckResult r{4, "caputo_rl_relation", false, worst, 5e-3, ""};
  r.passed = worst <= r.tolerance && exact_path <= 1e-10;
  r.detail = "exact_path_err=" + detail::sci(exact_path);
  return r;
}

// 5. psi = k, n = 1/2 gives f = k / (pi sqrt(x)); forward/inverse round trips.
inline CheckResult check_abel_inversion(const VerifyOptions& o = {}) {
  const Grid grid(1.0, detail::fine_n(o));
  const double k = 1.7;
  const AbelProblem constant{AbelKernel(0.5), SampledFunction::sample(grid, [&](double) { return k; })};
  const auto remarkable = invert_remarkable_solution(constant).density;
  const auto fractional = invert_fractional(constant);
  const auto exact = [&](double x) { return k / (std::numbers::pi * std::sqrt(x)); };
  const double err_rem = detail::interior_relative(remarkable, exact);
  const double err_frac = detail::interior_relative(fractional, exact);
  const double agree = detail::interior_relative(remarkable, fractional);

  double round_trip = 0.0;
  const std::vector<std::function<double(double)>> densities{[](double) { return 1.0; },
                                                             [](double x) { return 1.0 + x * x; }};
  const std::vector<std::function<double(double)>> data{[&](double) { return k; },
                                                        [](double a) { return 2.0 * std::sqrt(a); }};
  for (double n : {0.25, 0.5, 0.75}) {
    const AbelKernel kernel(n);
    for (const auto& f : densities) {
      const auto fn = SampledFunction::sample(grid, f);
      const AbelProblem p{kernel, forward(fn, kernel)};
      round_trip = std::max(round_trip, detail::interior_relative(invert_remarkable_solution(p).density, fn));
      round_trip = std::max(round_trip, detail::interior_relative(invert_fractional(p), fn));
    }
    for (const auto& psi : data) {
      const AbelProblem p{kernel, SampledFunction::sample(grid, psi)};
      round_trip = std::max(round_trip, detail::interior_relative(forward(invert_fractional(p), kernel), p.psi));
    }
  }

  CheckResult r{5, "abel_inversion", false, std::max(err_rem, err_frac), 1e-2, ""};
  r.passed = r.measured <= 1e-2 && agree <= 2e-2 && round_trip <= 1e-2;
  r.detail = "remarkable=" + detail::sci(err_rem) + " fractional=" + detail::sci(err_frac) +
             " agreement=" + detail::sci(agree) + " round_trip=" + detail::sci(round_trip);
  return r;
}

// 6. Equal descent times on the cycloid, unequal on the circle.
inline CheckResult check_tautochrone_constant(const VerifyOptions& o = {}) {
  const double g = 1.0;
  const double dt = o.quick ? 1e-3 : 1e-4;
  const Curve cycloid = Curve::cycloid(1.0);
  const Curve circle = Curve::circle(1.0);
  double quad = 0.0;
  double sim = 0.0;
  std::vector<double> arrivals;
  std::vector<double> circle_arrivals;
  for (double y0 : detail::release_heights()) {
    quad = std::max(quad, std::abs(descent_time(cycloid, y0, g) - std::numbers::pi) / std::numbers::pi);
    const double t = detail::arrival(cycloid, y0, g, dt);
    arrivals.push_back(t);
    sim = std::max(sim, std::abs(t - std::numbers::pi));
    circle_arrivals.push_back(detail::arrival(circle, y0, g, dt));
  }
  const double cycloid_spread = detail::spread(arrivals);
  const double circle_spread = detail::spread(circle_arrivals);
  CheckResult r{6, "tautochrone_constant", false, quad, 1e-6, ""};
  r.passed = quad <= 1e-6 && sim <= 1e-5 && cycloid_spread <= 1e-4 && circle_spread >= 1e-2;
  r.detail = "sim_err=" + detail::sci(sim) + " cycloid_spread=" + detail::sci(cycloid_spread) +
             " circle_spread=" + detail::sci(circle_spread);
  return r;
}

// 7. Full-height descent over free fall through the same height.
inline CheckResult check_pi_over_two(const VerifyOptions& = {}) {
  const Curve cycloid = Curve::cycloid(1.0);
  const double ratio = descent_time(cycloid, 2.0, 1.0) / free_fall_time(2.0, 1.0);
  CheckResult r{7, "pi_over_2_ratio", false, std::abs(ratio - 0.5 * std::numbers::pi), 1e-6, ""};
  r.passed = r.measured <= r.tolerance;
  r.detail = "ratio=" + detail::sci(ratio);
  return r;
}

// 8. time(B->I) / time(I->A) = phi / (pi - phi).
inline CheckResult check_prop26(const VerifyOptions& = {}) {
  const Curve cycloid = Curve::cycloid(1.0);
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double y_start = 0.2 * i;
    for (int j = 1; j <= 10; ++j) {
      const ArcTimeRatio q = huygens_prop26_ratio(cycloid, y_start, y_start * j / 11.0);
      worst = std::max(worst, std::abs(q.time_ratio - q.arc_ratio));
    }
  }
  CheckResult r{8, "prop26_arc_ratio", false, worst, 1e-4, "sweep=10x10"};
  r.passed = worst <= r.tolerance;
  return r;
}

// 9. T0 = pi, g = 1 gives s(y) = 2 sqrt(2 y) on the unit cycloid.
inline CheckResult check_reconstruction(const VerifyOptions& o = {}) {
  const double g = 1.0;
  const auto rec = reconstruct_tautochrone(DescentProfile::constant(std::numbers::pi), g, detail::fine_n(o));
  double s_err = 0.0;
  for (std::size_t i = 1; i < rec.arclength.size(); ++i) {
    const double exact = 2.0 * std::sqrt(2.0 * rec.arclength.x(i));
    s_err = std::max(s_err, std::abs(rec.arclength[i] - exact) / exact);
  }
  const double r_err = std::abs(*rec.radius - 1.0);
  const double dt = o.quick ? 1e-3 : 1e-4;
  double t_err = 0.0;
  for (double y0 : detail::release_heights()) {
    t_err = std::max(t_err, std::abs(detail::arrival(rec.curve, y0, g, dt) - std::numbers::pi) / std::numbers::pi);
  }
  CheckResult r{9, "reconstruction", false, s_err, 5e-3, ""};
  r.passed = s_err <= 5e-3 && r_err <= 5e-3 && t_err <= 5e-3;
  r.detail = "radius_err=" + detail::sci(r_err) + " resimulated_T_err=" + detail::sci(t_err);
  return r;
}

// 10. Laplace transform of the recovered density is k / sqrt(pi s).
inline CheckResult check_laplace(const VerifyOptions& o = {}) {
  const double k = 1.7;
  const Grid grid(16.0, o.quick ? 1025 : 2049);
  const AbelProblem problem{AbelKernel(0.5), SampledFunction::sample(grid, [&](double) { return k; })};
  const std::vector<SampledFunction> densities{invert_fractional(problem),
                                               invert_remarkable_solution(problem).density};
  const std::size_t head_nodes = 8;
  double worst = 0.0;
  bool tail_ok = true;
  for (const auto& f : densities) {
    // declared f ~ c t^(-1/2) at both ends, fitted at the boundary nodes
    const LaplaceHead head{head_nodes, {f[head_nodes] * std::sqrt(grid.x(head_nodes)), -0.5}};
    const std::size_t last = grid.size() - 1;
    const LaplaceTail tail = LaplaceTail::power(f[last] * std::sqrt(grid.x(last)), -0.5);
    for (double s : {1.0, 2.0, 4.0}) {
      const LaplaceResult lr = laplace_numeric(f, s, tail, head);
      const double exact = k * std::numbers::inv_sqrtpi / std::sqrt(s);
      worst = std::max(worst, std::abs(lr.value - exact) / exact);
      tail_ok = tail_ok && !lr.tail_dominant;
    }
  }
  CheckResult r{10, "laplace_route", false, worst, 1e-2, ""};
  r.passed = worst <= r.tolerance && tail_ok;
  r.detail = std::string("tail_dominant=") + (tail_ok ? "no" : "yes");
  return r;
}

// 11. Energy drift and fourth-order convergence on the harmonic case.
inline CheckResult check_simulator_health(const VerifyOptions& = {}) {
  const double g = 1.0;
  const Curve cycloid = Curve::cycloid(1.0);
  SimConfig config{cycloid, 1.0, g};
  config.trace_stride = 1u << 30;
  const SimResult run = simulate(config);
  const double coarse = std::abs(detail::arrival(cycloid, 1.0, g, 0.01) - std::numbers::pi);
  const double fine = std::abs(detail::arrival(cycloid, 1.0, g, 0.005) - std::numbers::pi);
  const double ratio = coarse / fine;
  CheckResult r{11, "simulator_health", false, run.energy_drift, 1e-8, ""};
  r.passed = run.arrival_time && run.energy_drift <= 1e-8 && ratio >= 12.0 && ratio <= 20.0;
  r.detail = "dt_halving_ratio=" + detail::sci(ratio) + " (expect 12..20)";
  return r;
}

/// Checks 1 to 11 in order.
inline std::vector<CheckResult> run_verify(const VerifyOptions& o = {}) {
  using Check = CheckResult (*)(const VerifyOptions&);
  const Check checks[] = {check_lacroix_values, check_left_inverse,         check_semigroup,
                          check_caputo_rl,      check_abel_inversion,       check_tautochrone_constant,
                          check_pi_over_two,    check_prop26,               check_reconstruction,
                          check_laplace,        check_simulator_health};
  std::vector<CheckResult> out;
  for (Check c : checks) out.push_back(c(o));
  return out;
}

}  // namespace fracabel
