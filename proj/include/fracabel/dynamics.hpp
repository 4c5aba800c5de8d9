#pragma once

// Bead on a frictionless wire, integrated in arc length:
//
//   s'' = -g dy/ds(s),   E = v^2/2 + g y(s)  (per unit mass).
//
// Serves as a time-domain check on the descent-time quadrature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "fracabel/curve.hpp"
#include "fracabel/error.hpp"

namespace fracabel {

struct SimConfig {
  Curve curve;
  double y0 = 1.0;            // release height, from rest
  double g = 9.81;
  double dt = 0.0;            // 0 selects 1e-4 of the natural time scale
  double max_time = 0.0;      // 0 selects 100 natural time scales
  double arrival_tol = 0.0;   // releases at or below this height arrive at t = 0
  std::size_t trace_stride = 1;  // record every k-th step
  bool check_step = true;     // reject dt above 1% of the natural time scale
};

struct SimSample {
  double t;
  double s;
  double v;
  double y;
  double energy;
};

struct SimResult {
  std::vector<SimSample> samples;
  std::optional<double> arrival_time;  // empty when the bead never reached the vertex
  double energy_drift = 0.0;           // max |E - E0| / E0 over the descent
  double dt = 0.0;
  std::size_t steps = 0;
};

/// sqrt(L / g) for the curve's characteristic length L.
inline double natural_time_scale(const Curve& curve, double g) {
  detail::require(std::isfinite(g) && g > 0.0, "gravity must be finite and positive");
  return std::sqrt(curve.length_scale() / g);
}

namespace detail {

struct ArcState {
  double s;
  double v;
};

inline ArcState rk4_step(const Curve& curve, double g, ArcState x, double dt) {
  const auto accel = [&](double s) { return -g * curve.slope_at_arc(s); };
  const double k1s = x.v;
  const double k1v = accel(x.s);
  const double k2s = x.v + 0.5 * dt * k1v;
  const double k2v = accel(x.s + 0.5 * dt * k1s);
  const double k3s = x.v + 0.5 * dt * k2v;
  const double k3v = accel(x.s + 0.5 * dt * k2s);
  const double k4s = x.v + dt * k3v;
  const double k4v = accel(x.s + dt * k3s);
  return {x.s + dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s),
          x.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

// root in [0, 1] of the cubic Hermite through (s0, v0 dt) and (s1, v1 dt)
inline double hermite_crossing(double s0, double d0, double s1, double d1) {
  const auto p = [&](double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * s0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * s1 + (t3 - t2) * d1;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (p(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Fixed-step RK4 from rest at y0 until the arc coordinate changes sign.
inline SimResult simulate(const SimConfig& config) {
  const Curve& curve = config.curve;
  const double g = config.g;
  const double scale = natural_time_scale(curve, g);
  detail::require(std::isfinite(config.y0) && config.y0 >= 0.0 && config.y0 <= curve.max_height(),
                  "simulate: release height outside the curve");
  const double dt = config.dt > 0.0 ? config.dt : 1e-4 * scale;
  detail::require(std::isfinite(dt), "simulate: step must be finite");
  if (config.check_step) {
    detail::require(dt <= 0.01 * scale, "simulate: dt exceeds 1% of the natural time scale sqrt(L/g)");
  }
  const double max_time = config.max_time > 0.0 ? config.max_time : 100.0 * scale;
  const std::size_t stride = std::max<std::size_t>(1, config.trace_stride);

  SimResult result;
  result.dt = dt;
  const double e0 = g * config.y0;
  detail::ArcState x{curve.arc_length(config.y0), 0.0};
  result.samples.push_back({0.0, x.s, x.v, config.y0, e0});
  if (config.y0 <= config.arrival_tol || x.s <= 0.0) {
    result.arrival_time = 0.0;
    return result;
  }

  double t = 0.0;
  while (t < max_time) {
    const detail::ArcState next = detail::rk4_step(curve, g, x, dt);
    ++result.steps;
    if (next.s <= 0.0) {
      const double tau = detail::hermite_crossing(x.s, x.v * dt, next.s, next.v * dt);
      result.arrival_time = t + tau * dt;
      const double v_arrival = next.v;  // only recorded for the trace
      result.samples.push_back({*result.arrival_time, 0.0, v_arrival, 0.0, 0.5 * v_arrival * v_arrival});
      return result;
    }
    x = next;
    t = static_cast<double>(result.steps) * dt;
    const double y = curve.height_at_arc(x.s);
    const double energy = 0.5 * x.v * x.v + g * y;
    result.energy_drift = std::max(result.energy_drift, std::abs(energy - e0) / e0);
    if (result.steps % stride == 0) result.samples.push_back({t, x.s, x.v, y, energy});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Pendulum periods
// ---------------------------------------------------------------------------

enum class PendulumKind { cycloidal, circular };

struct PendulumPeriod {
  double quarter = 0.0;  // release to lowest point
  double swing = 0.0;    // one side to the other
  double full = 0.0;     // back to the release point
};

/// Period from the simulated quarter swing (the motion is symmetric).
///
/// cycloidal: size is the generating radius r, amplitude the release height
/// in (0, 2r]. circular: size is the string length, amplitude the release
/// angle in radians, in (0, pi).
inline PendulumPeriod pendulum_period(PendulumKind kind, double size, double amplitude, double g,
                                      double dt = 0.0) {
  std::optional<Curve> curve;
  double y0 = 0.0;
  if (kind == PendulumKind::cycloidal) {
    curve = Curve::cycloid(size);
    detail::require(amplitude > 0.0 && amplitude <= 2.0 * size, "pendulum: cycloidal amplitude must lie in (0, 2r]");
    y0 = amplitude;
  } else {
    curve = Curve::circle(size);
    detail::require(amplitude > 0.0 && amplitude < 3.14159265358979, "pendulum: circular amplitude must lie in (0, pi)");
    y0 = size * (1.0 - std::cos(amplitude));
  }
  SimConfig config{*curve, y0, g, dt};
  config.trace_stride = 1u << 30;
  const SimResult run = simulate(config);
  if (!run.arrival_time) throw NumericalError("pendulum: bob did not reach the lowest point");
  const double q = *run.arrival_time;
  return {q, 2.0 * q, 4.0 * q};
}

}  // namespace fracabel
