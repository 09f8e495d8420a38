#include <gtest/gtest.h>

#include <cmath>

#include "degenwave/quadrature.hpp"

using degenwave::gauss_legendre_unit;

TEST(GaussLegendre, ExactForDegreeTwoPointsMinusOne) {
  for (int p = 1; p <= 8; ++p) {
    const auto rule = gauss_legendre_unit(p);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(p));
    for (int d = 0; d <= 2 * p - 1; ++d) {
      double s = 0;
      for (int i = 0; i < p; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], d);
      EXPECT_NEAR(s, 1.0 / (d + 1), 1e-14) << "points " << p << " degree " << d;
    }
  }
}

TEST(GaussLegendre, NodesInsideUnitIntervalAndSymmetric) {
  const auto rule = gauss_legendre_unit(5);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_GT(rule.nodes[i], 0.0);
    EXPECT_LT(rule.nodes[i], 1.0);
    EXPECT_NEAR(rule.nodes[i] + rule.nodes[4 - i], 1.0, 1e-15);
  }
}

TEST(GaussLegendre, RejectsNonPositiveCount) { EXPECT_THROW(gauss_legendre_unit(0), std::invalid_argument); }
