#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracabel/fracops.hpp"

using namespace fracabel;

namespace {

// I^a x^m = Gamma(m+1)/Gamma(m+a+1) x^(m+a), with libm's tgamma as oracle
double integral_of_power(double m, double a, double x) {
  return std::tgamma(m + 1.0) / std::tgamma(m + a + 1.0) * std::pow(x, m + a);
}

double derivative_of_power(double m, double a, double x) {
  return std::tgamma(m + 1.0) / std::tgamma(m - a + 1.0) * std::pow(x, m - a);
}

SampledFunction power(const Grid& g, double m) {
  return SampledFunction::sample(g, [m](double x) { return m == 0.0 ? 1.0 : std::pow(x, m); });
}

double max_rel_from(const SampledFunction& f, double x_min, const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.x(i) < x_min) continue;
    worst = std::max(worst, std::abs(f[i] / exact(f.x(i)) - 1.0));
  }
  return worst;
}

}  // namespace

TEST(FracOrder, ValidatesAndClassifies) {
  EXPECT_THROW((void)FracOrder(0.0), DomainError);
  EXPECT_THROW((void)FracOrder(-0.2), DomainError);
  EXPECT_THROW((void)FracOrder(INFINITY), DomainError);
  const FracOrder half(0.5);
  EXPECT_EQ(half.ceil_alpha(), 1);
  EXPECT_TRUE(half.in_unit_interval());
  EXPECT_FALSE(half.is_integer());
  EXPECT_TRUE(FracOrder(1.0).is_integer());
  EXPECT_EQ(FracOrder(1.5).ceil_alpha(), 2);
}

TEST(SampledFunction, RejectsNonFiniteAndSizeMismatch) {
  const Grid g(1.0, 5);
  EXPECT_THROW(SampledFunction(g, {0, 1, NAN, 3, 4}), DomainError);
  EXPECT_THROW(SampledFunction(g, {0, 1, 2}), DomainError);
}

TEST(ContractNodes, BandIsFivePercentWithFloorOfTwo) {
  EXPECT_EQ(first_contract_node(Grid(1.0, 9)), 2u);
  EXPECT_EQ(first_contract_node(Grid(1.0, 513)), 26u);
  EXPECT_EQ(first_contract_node(Grid(3.0, 2049)), 103u);
}

TEST(Differentiate, ExactForQuadratics) {
  const Grid g(2.0, 11);
  const auto d = differentiate(SampledFunction::sample(g, [](double x) { return 3 * x * x - x + 2; }));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(d[i], 6 * g.x(i) - 1, 1e-12);
}

TEST(RlIntegral, OrderOneIsTrapezoid) {
  const Grid g(1.0, 513);
  const auto i1 = rl_integral(power(g, 0.0), FracOrder(1.0));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(i1[i], g.x(i), 1e-14);
}

TEST(RlIntegral, ExactOnLinearData) {
  const Grid g(3.0, 65);
  for (double a : {0.1, 0.5, 0.9}) {
    const auto one = rl_integral(power(g, 0.0), FracOrder(a));
    const auto lin = rl_integral(power(g, 1.0), FracOrder(a));
    for (std::size_t i = 1; i < g.size(); ++i) {
      EXPECT_NEAR(one[i] / integral_of_power(0.0, a, g.x(i)), 1.0, 1e-12);
      EXPECT_NEAR(lin[i] / integral_of_power(1.0, a, g.x(i)), 1.0, 1e-12);
    }
  }
}

TEST(RlIntegral, RejectsOrdersAboveOne) {
  const Grid g(1.0, 9);
  EXPECT_THROW(rl_integral(power(g, 1.0), FracOrder(1.5)), DomainError);
}

TEST(RlDerivative, LacroixHalfDerivatives) {
  const Grid g(1.0, 513);
  const auto dx = rl_derivative(power(g, 1.0), FracOrder(0.5));
  const auto d1 = rl_derivative(power(g, 0.0), FracOrder(0.5));
  EXPECT_NEAR(dx[512], 2.0 / std::sqrt(std::numbers::pi), 5e-3 * 1.1284);
  EXPECT_NEAR(d1[512], 1.0 / std::sqrt(std::numbers::pi), 5e-3 * 0.5642);
}

TEST(RlDerivative, ValidatesArguments) {
  const Grid tiny(1.0, 4);
  EXPECT_THROW(rl_derivative(power(tiny, 1.0), FracOrder(0.5)), DomainError);
  const Grid g(1.0, 9);
  EXPECT_THROW(rl_derivative(power(g, 1.0), FracOrder(1.0)), DomainError);
  EXPECT_THROW(rl_derivative(power(g, 1.0), FracOrder(0.5), build_weights(g, 0.3)), DomainError);
  EXPECT_THROW(rl_derivative(power(g, 1.0), FracOrder(0.5), build_weights(Grid(2.0, 9), 0.5)), DomainError);
}

TEST(RlDerivative, ConvergesAtLeastOrderOnePointFiveAwayFromOrigin) {
  for (double m : {1.0, 2.0, 2.5}) {
    for (double a : {0.3, 0.5, 0.7}) {
      double previous = 0.0;
      for (std::size_t n : {129u, 257u, 513u}) {
        const Grid g(1.0, n);
        const auto d = rl_derivative(power(g, m), FracOrder(a));
        const double err = max_rel_from(d, 0.1, [&](double x) { return derivative_of_power(m, a, x); });
        if (previous > 0.0) {
          EXPECT_GE(std::log2(previous / err), 1.5) << "m=" << m << " a=" << a << " n=" << n;
        }
        previous = err;
      }
    }
  }
}

TEST(Caputo, AnnihilatesConstants) {
  const Grid g(1.0, 129);
  const auto c = caputo_derivative(SampledFunction::sample(g, [](double) { return 4.2; }), FracOrder(0.5));
  for (double v : c.values()) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(Caputo, ViaRlMatchesDirectRouteAwayFromOrigin) {
  const Grid g(1.0, 513);
  const auto f = SampledFunction::sample(g, [](double x) { return 1.0 + std::sin(x); });
  const auto a = caputo_derivative(f, FracOrder(0.4));
  const auto b = caputo_via_rl(f, FracOrder(0.4));
  EXPECT_LT(interior_residual(a, b).max_abs, 5e-3);
}

TEST(MonomialRules, ClosedForms) {
  using R = MonomialDerivativeRule;
  EXPECT_NEAR(monomial_closed_form({R::Variant::lacroix, 1.0, 0.5}, 1.0), 2.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(monomial_closed_form({R::Variant::lacroix, 0.0, 0.5}, 4.0), 0.5 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(monomial_closed_form({R::Variant::lacroix, 2.0, 1.0}, 3.0), 6.0, 1e-13);
  // the Leibniz form keeps the power but drops the gamma ratio
  EXPECT_NEAR(monomial_closed_form({R::Variant::leibniz, 1.0, 0.5}, 4.0), 2.0, 1e-15);
  EXPECT_THROW(monomial_closed_form({R::Variant::leibniz, 2.0, 0.5}, 1.0), DomainError);
  EXPECT_THROW(monomial_closed_form({R::Variant::lacroix, 1.0, 0.5}, 0.0), DomainError);
  EXPECT_THROW(monomial_closed_form({R::Variant::lacroix, 1.0, 1.5}, 1.0), DomainError);
  EXPECT_THROW(monomial_closed_form({R::Variant::lacroix, -1.0, 0.5}, 1.0), DomainError);
}

TEST(Identity, ResidualShrinksWithRefinement) {
  for (double a : {0.3, 0.5, 0.7}) {
    double previous = INFINITY;
    for (std::size_t n : {65u, 129u, 257u, 513u}) {
      const Grid g(1.0, n);
      const double r = fractional_identity_check(SampledFunction::sample(g, [](double x) { return std::sin(x); }),
                                                 FracOrder(a)).max_abs;
      EXPECT_LT(r, previous);
      previous = r;
    }
    EXPECT_LT(previous, 5e-3);
  }
}

// --- properties --------------------------------------------------------------

namespace {

struct PolyGen {
  std::mt19937_64 rng{314159};
  std::uniform_real_distribution<double> coef{-2.0, 2.0};
  std::uniform_real_distribution<double> order{0.05, 0.95};

  SampledFunction poly(const Grid& g, int degree) {
    std::vector<double> c(degree + 1);
    for (double& v : c) v = coef(rng);
    return SampledFunction::sample(g, [&](double x) {
      double s = 0.0;
      for (int k = degree; k >= 0; --k) s = s * x + c[k];
      return s;
    });
  }
};

SampledFunction combine(double a, const SampledFunction& f, double b, const SampledFunction& h) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f[i] + b * h[i];
  return SampledFunction(f.grid(), std::move(v));
}

}  // namespace

TEST(FracopsProperty, Linearity) {
  PolyGen gen;
  const Grid g(1.0, 129);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = gen.poly(g, 3);
    const auto h = gen.poly(g, 2);
    const double a = gen.coef(gen.rng);
    const double b = gen.coef(gen.rng);
    const FracOrder order(gen.order(gen.rng));
    const auto lhs_i = rl_integral(combine(a, f, b, h), order);
    const auto rhs_i = combine(a, rl_integral(f, order), b, rl_integral(h, order));
    const auto lhs_d = rl_derivative(combine(a, f, b, h), order);
    const auto rhs_d = combine(a, rl_derivative(f, order), b, rl_derivative(h, order));
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(lhs_i[i], rhs_i[i], 1e-12);
      EXPECT_NEAR(lhs_d[i], rhs_d[i], 1e-9);
    }
  }
}

TEST(FracopsProperty, Semigroup) {
  PolyGen gen;
  const Grid g(1.0, 513);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.05 + 0.45 * gen.order(gen.rng);
    const double b = 0.05 + 0.45 * gen.order(gen.rng);
    const auto f = gen.poly(g, 3);
    const auto nested = rl_integral(rl_integral(f, FracOrder(b)), FracOrder(a));
    const auto direct = rl_integral(f, FracOrder(a + b));
    EXPECT_LT(interior_residual(nested, direct).max_abs, 5e-3) << "a=" << a << " b=" << b;
  }
}

// I^(1+a) = I^1 I^a. The general-order weights are exact on linear data;
// the stepped route carries the trapezoid error and must shrink with h.
TEST(FracopsProperty, StepDownThroughOrderOne) {
  PolyGen gen;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.order(gen.rng);
    const double c0 = gen.coef(gen.rng);
    const double c1 = gen.coef(gen.rng);
    const auto exact = [&](double x) {
      return c0 * std::pow(x, 1.0 + a) / std::tgamma(2.0 + a) + c1 * std::pow(x, 2.0 + a) / std::tgamma(3.0 + a);
    };
    double previous = INFINITY;
    for (std::size_t n : {129u, 257u, 513u}) {
      const Grid g(1.0, n);
      const auto f = SampledFunction::sample(g, [&](double x) { return c0 + c1 * x; });
      const auto big = detail::product_weights(g, 1.0 + a).apply(f.values());
      const auto stepped = cumulative_integral(rl_integral(f, FracOrder(a)));
      double err = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        EXPECT_NEAR(big[i] / std::tgamma(1.0 + a), exact(g.x(i)), 1e-12);
        err = std::max(err, std::abs(stepped[i] - big[i] / std::tgamma(1.0 + a)));
      }
      EXPECT_LT(err, previous) << "a=" << a;
      previous = err;
    }
    EXPECT_LT(previous, 1e-3) << "a=" << a;
  }
}

TEST(FracopsProperty, LeftInverseOnRandomPolynomials) {
  PolyGen gen;
  const Grid g(1.0, 257);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen.poly(g, 3);
    EXPECT_LT(fractional_identity_check(f, FracOrder(gen.order(gen.rng))).max_abs, 5e-3);
  }
}

TEST(FracopsProperty, DerivativeOfHigherIntegralStepsDown) {
  PolyGen gen;
  const Grid g(1.0, 513);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = gen.order(gen.rng);
    const auto f = gen.poly(g, 3);
    const auto table = detail::product_weights(g, 1.0 + a);
    std::vector<double> big = table.apply(f.values());
    for (double& v : big) v /= gamma_fn(1.0 + a);
    const auto stepped = differentiate(SampledFunction(g, std::move(big)));
    EXPECT_LT(interior_residual(stepped, rl_integral(f, FracOrder(a))).max_abs, 5e-3) << "a=" << a;
  }
}
