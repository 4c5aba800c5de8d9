#pragma once

// Descent curves measured from their lowest point (the vertex, y = 0, s = 0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracabel/error.hpp"
#include "fracabel/quadrature.hpp"

namespace fracabel {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
public:
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    detail::require(xs_.size() == ys_.size(), "monotone cubic: x and y sizes differ");
    detail::require(xs_.size() >= 2, "monotone cubic: need at least 2 points");
    for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
      detail::require(xs_[k + 1] > xs_[k], "monotone cubic: abscissae must increase strictly");
    }
    compute_slopes();
  }

  double front() const { return xs_.front(); }
  double back() const { return xs_.back(); }
  std::span<const double> knots() const { return xs_; }
  std::span<const double> values() const { return ys_; }

  double operator()(double x) const {
    const std::size_t k = interval(x);
    const double h = xs_[k + 1] - xs_[k];
    const double t = (x - xs_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ys_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] +
           (-2 * t3 + 3 * t2) * ys_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
  }

  double derivative(double x) const {
    const std::size_t k = interval(x);
    const double h = xs_[k + 1] - xs_[k];
    const double t = (x - xs_[k]) / h;
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * ys_[k] / h + (3 * t2 - 4 * t + 1) * slopes_[k] +
           (-6 * t2 + 6 * t) * ys_[k + 1] / h + (3 * t2 - 2 * t) * slopes_[k + 1];
  }

  /// x with (*this)(x) == y for increasing data.
  double inverse(double y) const {
    if (y <= ys_.front()) return xs_.front();
    if (y >= ys_.back()) return xs_.back();
    const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
    const auto k = static_cast<std::size_t>(std::distance(ys_.begin(), it)) - 1;
    double lo = xs_[k];
    double hi = xs_[k + 1];
    double x = lo + (hi - lo) * (y - ys_[k]) / (ys_[k + 1] - ys_[k]);
    for (int iter = 0; iter < 100; ++iter) {
      const double r = (*this)(x) - y;
      if (r > 0.0) hi = x; else lo = x;
      const double d = derivative(x);
      double next = d > 0.0 ? x - r / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
      x = next;
    }
    return x;
  }

private:
  std::size_t interval(double x) const {
    if (x <= xs_.front()) return 0;
    if (x >= xs_.back()) return xs_.size() - 2;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return static_cast<std::size_t>(std::distance(xs_.begin(), it)) - 1;
  }

  void compute_slopes() {
    const std::size_t n = xs_.size();
    slopes_.assign(n, 0.0);
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = xs_[k + 1] - xs_[k];
      delta[k] = (ys_[k + 1] - ys_[k]) / h[k];
    }
    if (n == 2) {
      slopes_[0] = slopes_[1] = delta[0];
      return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    slopes_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  // three-point end slope, limited to keep the end interval monotone
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
    return d;
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Planar descent curve. Heights are measured from the vertex and grow
/// along the curve; arc length s is measured from the vertex.
class Curve {
public:
  enum class Kind { cycloid, line, circle, sampled };

  /// Cycloid generated by a circle of radius r: x = r(theta + sin theta),
  /// y = r(1 - cos theta), theta in [0, pi].
  static Curve cycloid(double radius) {
    detail::require(std::isfinite(radius) && radius > 0.0, "cycloid: radius must be positive");
    return Curve(Cycloid{radius});
  }

  /// Straight incline of vertical drop `height` and length `length`.
  static Curve line(double height, double length) {
    detail::require(std::isfinite(height) && height > 0.0, "line: height must be positive");
    detail::require(std::isfinite(length) && length >= height, "line: length must be at least the height");
    return Curve(Line{height, length});
  }

  /// Circular arc of radius R with its lowest point at the vertex.
  static Curve circle(double radius) {
    detail::require(std::isfinite(radius) && radius > 0.0, "circle: radius must be positive");
    return Curve(Circle{radius});
  }

  /// Arc length s(y) given at increasing heights starting from (0, 0).
  static Curve from_arclength(std::vector<double> heights, std::vector<double> arcs) {
    detail::require(heights.size() == arcs.size() && heights.size() >= 3,
                    "arclength curve: need at least 3 (y, s) samples");
    detail::require(heights.front() == 0.0 && arcs.front() == 0.0, "arclength curve: must start at the vertex");
    for (std::size_t k = 0; k + 1 < heights.size(); ++k) {
      detail::require(arcs[k + 1] > arcs[k], "arclength curve: s must increase strictly with y");
    }
    return Curve(Sampled{MonotoneCubic(std::move(heights), std::move(arcs))});
  }

  /// Graph y(x) for x increasing from the vertex; y must increase strictly.
  static Curve from_graph(std::vector<double> xs, std::vector<double> ys) {
    detail::require(xs.size() == ys.size() && xs.size() >= 3, "graph curve: need at least 3 samples");
    detail::require(xs.front() == 0.0 && ys.front() == 0.0, "graph curve: must start at the vertex");
    const MonotoneCubic y_of_x(xs, ys);
    std::vector<double> arcs(xs.size(), 0.0);
    const GaussRule ref = gauss_legendre(8);
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double piece = remap(ref, xs[k], xs[k + 1]).integrate([&](double x) {
        const double d = y_of_x.derivative(x);
        return std::sqrt(1.0 + d * d);
      });
      arcs[k + 1] = arcs[k] + piece;
    }
    return from_arclength(std::move(ys), std::move(arcs));
  }

  /// Parametric samples (x(p), y(p)) at increasing parameter p, from the vertex.
  static Curve from_parametric(std::vector<double> params, std::vector<double> xs, std::vector<double> ys) {
    detail::require(params.size() == xs.size() && xs.size() == ys.size() && xs.size() >= 3,
                    "parametric curve: need at least 3 samples");
    detail::require(xs.front() == 0.0 && ys.front() == 0.0, "parametric curve: must start at the vertex");
    const MonotoneCubic x_of_p(params, xs);
    const MonotoneCubic y_of_p(params, ys);
    std::vector<double> arcs(xs.size(), 0.0);
    const GaussRule ref = gauss_legendre(8);
    for (std::size_t k = 0; k + 1 < params.size(); ++k) {
      const double piece = remap(ref, params[k], params[k + 1]).integrate([&](double p) {
        return std::hypot(x_of_p.derivative(p), y_of_p.derivative(p));
      });
      arcs[k + 1] = arcs[k] + piece;
    }
    return from_arclength(std::move(ys), std::move(arcs));
  }

  Kind kind() const {
    return std::visit([](const auto& c) { return c.kind; }, shape_);
  }

  std::string name() const {
    switch (kind()) {
      case Kind::cycloid: return "cycloid";
      case Kind::line: return "line";
      case Kind::circle: return "circle";
      case Kind::sampled: return "sampled";
    }
    return "curve";
  }

  /// Generating radius for cycloid and circle kinds.
  double radius() const {
    if (const auto* c = std::get_if<Cycloid>(&shape_)) return c->r;
    if (const auto* c = std::get_if<Circle>(&shape_)) return c->r;
    throw DomainError("curve: only cycloid and circle curves have a radius");
  }

  double max_height() const {
    return std::visit([](const auto& c) { return c.max_height(); }, shape_);
  }

  double max_arc() const { return arc_length(max_height()); }

  /// Characteristic length; sqrt(length_scale / g) sets the natural time scale.
  double length_scale() const {
    return std::visit([](const auto& c) { return c.length_scale(); }, shape_);
  }

  double arc_length(double y) const {
    check_height(y);
    return std::visit([y](const auto& c) { return c.arc_length(y); }, shape_);
  }

  double ds_dy(double y) const {
    check_height(y);
    return std::visit([y](const auto& c) { return c.ds_dy(y); }, shape_);
  }

  /// ds/dy at y = y0 sin^2(phi), times sin(phi). Bounded for curves with a
  /// smooth vertex, which is what makes the descent-time substitution work.
  double descent_integrand(double y0, double phi) const {
    return std::visit([y0, phi](const auto& c) { return c.descent_integrand(y0, phi); }, shape_);
  }

  /// Height at arc length s >= 0.
  double height_at_arc(double s) const {
    return std::visit([s](const auto& c) { return c.height_at_arc(s); }, shape_);
  }

  /// dy/ds at arc length s, continued smoothly past the vertex for s < 0.
  double slope_at_arc(double s) const {
    return std::visit([s](const auto& c) { return c.slope_at_arc(s); }, shape_);
  }

  /// Heights where a sampled curve's interpolant changes piece; empty otherwise.
  std::span<const double> height_knots() const {
    if (const auto* c = std::get_if<Sampled>(&shape_)) return c->s_of_y.knots();
    return {};
  }

private:
  struct Cycloid {
    static constexpr Kind kind = Kind::cycloid;
    double r;
    double max_height() const { return 2.0 * r; }
    double length_scale() const { return r; }
    double arc_length(double y) const { return std::sqrt(8.0 * r * y); }
    double ds_dy(double y) const { return std::sqrt(2.0 * r / y); }
    double descent_integrand(double y0, double phi) const {
      // in the rolling angle: ds/dtheta = 2r cos(theta/2), dy/dtheta = r sin(theta)
      const double theta = 2.0 * std::asin(std::min(1.0, std::sqrt(y0 / (2.0 * r)) * std::sin(phi)));
      return 2.0 * r * std::cos(0.5 * theta) / (r * std::sin(theta)) * std::sin(phi);
    }
    double height_at_arc(double s) const { return s * s / (8.0 * r); }
    double slope_at_arc(double s) const { return s / (4.0 * r); }
  };

  struct Line {
    static constexpr Kind kind = Kind::line;
    double h;
    double length;
    double max_height() const { return h; }
    double length_scale() const { return h; }
    double arc_length(double y) const { return y * length / h; }
    double ds_dy(double) const { return length / h; }
    double descent_integrand(double, double phi) const { return length / h * std::sin(phi); }
    double height_at_arc(double s) const { return s * h / length; }
    double slope_at_arc(double) const { return h / length; }
  };

  struct Circle {
    static constexpr Kind kind = Kind::circle;
    double r;
    double max_height() const { return 2.0 * r; }
    double length_scale() const { return r; }
    double arc_length(double y) const { return r * std::acos(1.0 - y / r); }
    double ds_dy(double y) const { return r / std::sqrt(y * (2.0 * r - y)); }
    double descent_integrand(double y0, double phi) const {
      const double sp = std::sin(phi);
      return std::sqrt(r / y0) / std::sqrt(2.0 - y0 * sp * sp / r);
    }
    double height_at_arc(double s) const { return r * (1.0 - std::cos(s / r)); }
    double slope_at_arc(double s) const { return std::sin(s / r); }
  };

  struct Sampled {
    static constexpr Kind kind = Kind::sampled;
    MonotoneCubic s_of_y;
    double max_height() const { return s_of_y.back(); }
    double length_scale() const { return 0.5 * s_of_y.back(); }
    double arc_length(double y) const { return s_of_y(y); }
    double ds_dy(double y) const { return s_of_y.derivative(y); }
    double descent_integrand(double y0, double phi) const {
      const double sp = std::sin(phi);
      return s_of_y.derivative(y0 * sp * sp) * sp;
    }
    double height_at_arc(double s) const { return s_of_y.inverse(s); }
    double slope_at_arc(double s) const {
      return 1.0 / s_of_y.derivative(s > 0.0 ? s_of_y.inverse(s) : 0.0);
    }
  };

  using Shape = std::variant<Cycloid, Line, Circle, Sampled>;

  explicit Curve(Shape shape) : shape_(std::move(shape)) {}

  void check_height(double y) const {
    detail::require(std::isfinite(y) && y >= 0.0 && y <= max_height() * (1.0 + 1e-12),
                    "curve: height outside the curve's range");
  }

  Shape shape_;
};

}  // namespace fracabel
