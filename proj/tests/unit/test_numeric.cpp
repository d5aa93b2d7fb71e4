#include <gtest/gtest.h>

#include <cmath>

#include "fri2d/error.hpp"
#include "fri2d/grid.hpp"
#include "fri2d/numeric.hpp"
#include "oracles.hpp"

using namespace fri2d;

TEST(Sinc, ExactZerosAtNonzeroIntegers) {
  EXPECT_EQ(sinc(0.0), 1.0);
  for (int n = 1; n <= 40; ++n) {
    EXPECT_EQ(sinc(n), 0.0) << n;
    EXPECT_EQ(sinc(-n), 0.0) << n;
  }
}

TEST(Sinc, MatchesDirectFormula) {
  for (double u : {0.1, -0.37, 1.5, 2.25, -7.9, 12.01}) {
    EXPECT_NEAR(sinc(u), oracle::plain_sinc(u), 1e-14) << u;
  }
}

TEST(BSpline, CenterAndHatValues) {
  EXPECT_EQ(bspline(0, 0.0), 1.0);
  EXPECT_EQ(bspline(0, 0.5), 0.5);
  EXPECT_EQ(bspline(0, 0.75), 0.0);
  EXPECT_DOUBLE_EQ(bspline(1, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(bspline(1, 0.0), 1.0);
  EXPECT_EQ(bspline(1, 1.0), 0.0);
}

TEST(BSpline, CubicCenterMatchesRepeatedConvolution) {
  const double conv = oracle::bspline_by_convolution(3, 0.0);
  EXPECT_NEAR(conv, 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(bspline(3, 0.0), conv, 1e-6);
}

TEST(BSpline, MatchesConvolutionAcrossSupport) {
  for (int r = 1; r <= 4; ++r) {
    for (double t : {-1.7, -0.9, -0.25, 0.3, 0.8, 1.35}) {
      EXPECT_NEAR(bspline(r, t), oracle::bspline_by_convolution(r, t, 1e-3), 1e-5) << r << " " << t;
    }
  }
}

TEST(BSpline, PartitionOfUnity) {
  for (int r = 0; r <= 4; ++r) {
    for (double t : {0.0, 0.13, 0.5, 0.77}) {
      double sum = 0.0;
      for (int n = -6; n <= 6; ++n) sum += bspline(r, t - n);
      EXPECT_NEAR(sum, 1.0, 1e-14) << r << " " << t;
    }
  }
}

TEST(BSpline, PieceAgreesInsideItsInterval) {
  const int r = 3;
  for (int piece = 0; piece <= r; ++piece) {
    const double t = -0.5 * (r + 1) + piece + 0.4;
    EXPECT_NEAR(bspline_piece(r, piece, t), bspline(r, t), 1e-14);
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n : {2, 5, 8, 10}) {
    const auto& rule = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(q, exact, 1e-14) << n << " " << deg;
    }
  }
}

TEST(Wrap, IntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap(2.5, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(wrap(-0.5, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(wrap(2.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap(0.2, 1.0, -0.5), 0.2);
  EXPECT_DOUBLE_EQ(wrap(0.7, 1.0, -0.5), -0.3);
}

TEST(SpectralGrid, PeriodsAndCounts) {
  const SpectralGrid g({-2, 3}, {-1, 1}, kPi, 2.0);
  EXPECT_EQ(g.k1().size(), 6);
  EXPECT_EQ(g.count(), 18u);
  EXPECT_DOUBLE_EQ(g.period_x(), 2.0);
  EXPECT_DOUBLE_EQ(g.period_y(), kPi);
  EXPECT_DOUBLE_EQ(g.critical_rate_x(), 6 * kPi);
}

TEST(SpectralGrid, RejectsInvalidRanges) {
  EXPECT_THROW(SpectralGrid({1, 0}, {0, 0}, 1.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralGrid({0, 0}, {0, 0}, 0.0, 1.0), ConfigError);
  EXPECT_THROW(SpectralGrid({0, 0}, {0, 0}, 1.0, -1.0), ConfigError);
}
