#pragma once

// Descent times along curves, reconstruction of the tautochrone from a
// constant descent time, the arc-ratio law for partial descents on the
// cycloid, and a brachistochrone comparison.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracabel/abel.hpp"
#include "fracabel/curve.hpp"
#include "fracabel/error.hpp"
#include "fracabel/quadrature.hpp"

namespace fracabel {

namespace detail {

inline constexpr std::size_t kDescentPanels = 8;
inline constexpr std::size_t kDescentPanelPoints = 16;
inline constexpr std::size_t kSampledPiecePoints = 8;

inline void require_gravity(double g) {
  require(std::isfinite(g) && g > 0.0, "gravity must be finite and positive");
}

// int_{phi_lo}^{phi_hi} ds/dy(y0 sin^2 phi) sin(phi) dphi
inline double descent_integral(const Curve& curve, double y0, double phi_lo, double phi_hi) {
  if (phi_hi <= phi_lo) return 0.0;
  double total = 0.0;
  const auto integrand = [&](double phi) { return curve.descent_integrand(y0, phi); };
  if (curve.kind() == Curve::Kind::sampled) {
    // split where the interpolant changes piece: phi_k = asin(sqrt(y_k / y0))
    std::vector<double> cuts{phi_lo};
    for (double yk : curve.height_knots()) {
      if (yk <= 0.0 || yk >= y0) continue;
      const double phi = std::asin(std::sqrt(yk / y0));
      if (phi > phi_lo && phi < phi_hi) cuts.push_back(phi);
    }
    cuts.push_back(phi_hi);
    const GaussRule ref = gauss_legendre(kSampledPiecePoints);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      total += remap(ref, cuts[k], cuts[k + 1]).integrate(integrand);
    }
    return total;
  }
  const GaussRule ref = gauss_legendre(kDescentPanelPoints);
  const double width = (phi_hi - phi_lo) / static_cast<double>(kDescentPanels);
  for (std::size_t k = 0; k < kDescentPanels; ++k) {
    const double a = phi_lo + width * static_cast<double>(k);
    total += remap(ref, a, a + width).integrate(integrand);
  }
  return total;
}

inline double release_phase(double y, double y0) { return std::asin(std::sqrt(std::clamp(y / y0, 0.0, 1.0))); }

}  // namespace detail

/// Time to slide from rest at height y0 down to the vertex:
///
///   T = int_0^{y0} (ds/dy) / sqrt(2 g (y0 - y)) dy
///     = sqrt(2 y0 / g) int_0^{pi/2} ds/dy(y0 sin^2 phi) sin(phi) dphi.
inline double descent_time(const Curve& curve, double y0, double g) {
  detail::require_gravity(g);
  detail::require(std::isfinite(y0) && y0 > 0.0, "descent_time: release height must be positive");
  detail::require(y0 <= curve.max_height() * (1.0 + 1e-12), "descent_time: release height exceeds the curve");
  const double integral = detail::descent_integral(curve, y0, 0.0, 0.5 * std::numbers::pi);
  detail::require(std::isfinite(integral) && integral > 0.0, "descent_time: ds/dy must be positive along the path");
  return std::sqrt(2.0 * y0 / g) * integral;
}

/// Time to pass from height y_from down to y_to after release at y_start.
inline double partial_descent_time(const Curve& curve, double y_start, double y_from, double y_to, double g) {
  detail::require_gravity(g);
  detail::require(y_start > 0.0 && y_start <= curve.max_height() * (1.0 + 1e-12),
                  "partial_descent_time: release height outside the curve");
  detail::require(0.0 <= y_to && y_to <= y_from && y_from <= y_start,
                  "partial_descent_time: need 0 <= y_to <= y_from <= y_start");
  const double integral = detail::descent_integral(curve, y_start, detail::release_phase(y_to, y_start),
                                                   detail::release_phase(y_from, y_start));
  return std::sqrt(2.0 * y_start / g) * integral;
}

/// sqrt(2 h / g).
inline double free_fall_time(double height, double g) {
  detail::require_gravity(g);
  detail::require(std::isfinite(height) && height > 0.0, "free_fall_time: height must be positive");
  return std::sqrt(2.0 * height / g);
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

/// Descent time as a function of release height.
class DescentProfile {
public:
  static DescentProfile constant(double t0) {
    detail::require(std::isfinite(t0) && t0 > 0.0, "descent profile: time must be positive");
    return DescentProfile(t0, std::nullopt);
  }

  /// T(y) on a height grid; every sample must be positive.
  static DescentProfile sampled(SampledFunction times) {
    for (double t : times.values()) detail::require(t > 0.0, "descent profile: times must be positive");
    return DescentProfile(0.0, std::move(times));
  }

  bool is_constant() const { return !samples_.has_value(); }
  double constant_time() const {
    detail::require(is_constant(), "descent profile: profile is not constant");
    return t0_;
  }
  const SampledFunction& samples() const {
    detail::require(!is_constant(), "descent profile: profile is constant");
    return *samples_;
  }

private:
  DescentProfile(double t0, std::optional<SampledFunction> samples) : t0_(t0), samples_(std::move(samples)) {}

  double t0_;
  std::optional<SampledFunction> samples_;
};

struct TautochroneReconstruction {
  Curve curve;                  // arclength kind, s(y)
  SampledFunction arclength;    // s at the height grid
  std::optional<double> radius;  // matched cycloid radius for a constant profile
};

/// Recovers s(y) from the descent-time profile by inverting
/// sqrt(2g) T(y) = int_0^y (ds/dz) (y - z)^(-1/2) dz with the closed-form
/// Abel inverter. A constant T0 is matched to the cycloid with
/// r = g (T0/pi)^2 and sampled over its full height 2r.
inline TautochroneReconstruction reconstruct_tautochrone(const DescentProfile& profile, double g,
                                                         std::size_t grid_n = 513) {
  detail::require_gravity(g);
  std::optional<double> radius;
  std::optional<SampledFunction> psi;
  const double scale = std::sqrt(2.0 * g);
  if (profile.is_constant()) {
    const double t0 = profile.constant_time();
    const double ratio = t0 / std::numbers::pi;
    radius = g * ratio * ratio;
    const Grid grid(2.0 * *radius, grid_n);
    psi = SampledFunction::sample(grid, [&](double) { return scale * t0; });
  } else {
    const SampledFunction& times = profile.samples();
    std::vector<double> values(times.values().begin(), times.values().end());
    for (double& v : values) v *= scale;
    psi = SampledFunction(times.grid(), std::move(values));
  }
  const AbelProblem problem{AbelKernel(0.5), *psi};
  SampledFunction s = invert_remarkable(problem);
  Curve curve = Curve::from_arclength(s.grid().nodes(), std::vector<double>(s.values().begin(), s.values().end()));
  return {std::move(curve), std::move(s), radius};
}

/// Best-effort horizontal coordinate x(y) = int_0^y sqrt((ds/dy)^2 - 1) dy
/// of a reconstructed curve, for plotting. Loses accuracy near the vertex.
inline SampledFunction horizontal_profile(const TautochroneReconstruction& rec) {
  const Grid& grid = rec.arclength.grid();
  std::vector<double> x(grid.size(), 0.0);
  const GaussRule ref = gauss_legendre(8);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double piece = remap(ref, grid.x(k), grid.x(k + 1)).integrate([&](double y) {
      const double d = rec.curve.ds_dy(y);
      return std::sqrt(std::max(0.0, d * d - 1.0));
    });
    x[k + 1] = x[k] + piece;
  }
  return SampledFunction(grid, std::move(x));
}

// ---------------------------------------------------------------------------
// Arc-ratio law
// ---------------------------------------------------------------------------

struct ArcTimeRatio {
  double time_ratio = 0.0;  // time(B -> I) / time(I -> A)
  double arc_ratio = 0.0;   // arc FH / arc HA = phi / (pi - phi)
};

/// Release at y_start (B), pass height y_mid (I), finish at the vertex (A).
/// The arcs FH and HA split the semicircle on diameter y_start at the
/// central angle phi = arccos(2 y_mid / y_start - 1).
inline ArcTimeRatio huygens_prop26_ratio(const Curve& cycloid, double y_start, double y_mid, double g = 1.0) {
  detail::require(cycloid.kind() == Curve::Kind::cycloid, "prop26: curve must be a cycloid");
  detail::require(std::isfinite(y_start) && std::isfinite(y_mid), "prop26: heights must be finite");
  detail::require(0.0 < y_mid && y_mid < y_start, "prop26: need 0 < y_mid < y_start");
  detail::require(y_start <= cycloid.max_height(), "prop26: y_start exceeds the cycloid");
  const double upper = partial_descent_time(cycloid, y_start, y_start, y_mid, g);
  const double lower = partial_descent_time(cycloid, y_start, y_mid, 0.0, g);
  const double phi = std::acos(2.0 * y_mid / y_start - 1.0);
  return {upper / lower, phi / (std::numbers::pi - phi)};
}

// ---------------------------------------------------------------------------
// Brachistochrone comparison
// ---------------------------------------------------------------------------

struct BrachistochroneTable {
  double chord = 0.0;
  double circle_arc = 0.0;
  double cycloid = 0.0;
  double cycloid_radius = 0.0;  // 0 for a vertical drop
  double cycloid_angle = 0.0;   // rolling angle at b

  std::vector<std::pair<std::string, double>> rows() const {
    return {{"chord", chord}, {"circle_arc", circle_arc}, {"cycloid", cycloid}};
  }
};

namespace detail {

// rolling angle theta in (0, 2 pi) with (theta - sin theta) / (1 - cos theta) = ratio
inline double cycloid_angle_for(double ratio) {
  const auto shape = [](double t) { return (t - std::sin(t)) / (1.0 - std::cos(t)); };
  double lo = 1e-12;
  double hi = 2.0 * std::numbers::pi - 1e-12;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (shape(mid) < ratio) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Descent times from rest at a to b along three candidates: the straight
/// chord, the circular arc with its lowest point (horizontal tangent) at b,
/// and the cycloid with its cusp at a.
inline BrachistochroneTable brachistochrone_compare(Point a, Point b, double g) {
  detail::require_gravity(g);
  detail::require(std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(b.x) && std::isfinite(b.y),
                  "brachistochrone: coordinates must be finite");
  const double drop = a.y - b.y;
  const double run = std::abs(b.x - a.x);
  if (!(drop > 0.0)) throw DomainError("brachistochrone: no descending cycloid, b must lie below a");

  BrachistochroneTable table;
  if (run <= 1e-12 * drop) {
    const double t = free_fall_time(drop, g);
    table.chord = table.circle_arc = table.cycloid = t;
    return table;
  }

  const double chord_length = std::hypot(run, drop);
  table.chord = descent_time(Curve::line(drop, chord_length), drop, g);

  const double arc_radius = (run * run + drop * drop) / (2.0 * drop);
  table.circle_arc = descent_time(Curve::circle(arc_radius), drop, g);

  // cusp at a: x = r (theta - sin theta), depth = r (1 - cos theta)
  const double theta_b = detail::cycloid_angle_for(run / drop);
  const double r = drop / (1.0 - std::cos(theta_b));
  const GaussRule rule = gauss_legendre(32, 0.0, theta_b);
  table.cycloid = rule.integrate([&](double theta) {
    const double ds = 2.0 * r * std::sin(0.5 * theta);  // ds/dtheta
    const double depth = r * (1.0 - std::cos(theta));
    return ds / std::sqrt(2.0 * g * depth);
  });
  table.cycloid_radius = r;
  table.cycloid_angle = theta_b;
  return table;
}

}  // namespace fracabel
