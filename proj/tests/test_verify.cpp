#include <gtest/gtest.h>

#include "fracabel/verify.hpp"

using namespace fracabel;

TEST(Verify, QuickRunPassesEveryProperty) {
  const auto results = run_verify({true, 0.0});
  ASSERT_EQ(results.size(), 11u);
  for (std::size_t k = 0; k < results.size(); ++k) {
    EXPECT_EQ(results[k].id, static_cast<int>(k + 1));
    EXPECT_TRUE(results[k].passed) << format_check(results[k]);
    EXPECT_GE(results[k].measured, 0.0);
  }
}

TEST(Verify, CorruptedWeightsFailNamedProperties) {
  const VerifyOptions faulty{true, 0.05};
  for (auto check : {check_lacroix_values, check_left_inverse, check_semigroup, check_caputo_rl}) {
    const CheckResult r = check(faulty);
    EXPECT_FALSE(r.passed) << format_check(r);
    EXPECT_EQ(format_check(r).rfind("FAIL", 0), 0u);
    EXPECT_NE(format_check(r).find(r.name), std::string::npos);
  }
}

TEST(Verify, FormatLine) {
  const CheckResult r{3, "semigroup", true, 1.5e-7, 5e-3, "monotone=yes"};
  EXPECT_EQ(format_check(r), "PASS [ 3] semigroup                measured=1.500e-07 tol=5.000e-03  monotone=yes");
}
