#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fri2d/error.hpp"
#include "fri2d/kernels.hpp"
#include "oracles.hpp"

using namespace fri2d;

namespace {

SpectralGrid grid(int half, double w0) { return SpectralGrid::symmetric(half, w0); }

Eigen::MatrixXcd random_q(int n1, int n2, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  Eigen::MatrixXcd q(n1, n2);
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) q(a, b) = std::polar(mag(rng), ph(rng));
  }
  return q;
}

}  // namespace

TEST(SmsKernel, UnitResponseOnGrid) {
  for (int r : {1, 2, 3}) {
    const SeparableSmsKernel k(grid(3, kPi / 0.99), r, r + 1);
    for (int k1 = -3; k1 <= 3; ++k1) {
      for (int k2 = -3; k2 <= 3; ++k2) {
        EXPECT_NEAR(sms_freq(k, k1 * k.grid().omega0x(), k2 * k.grid().omega0y()), 1.0, 1e-15);
      }
    }
  }
}

TEST(SmsKernel, ZerosAtShiftedGridPoints) {
  const SeparableSmsKernel k(grid(2, 2.0), 2, 1);
  for (int k1 = -2; k1 <= 2; ++k1) {
    for (int m1 : {-2, -1, 1, 2}) {
      EXPECT_EQ(sms_freq(k, (k1 + 5 * m1) * 2.0, 1 * 2.0), 0.0);
    }
  }
}

TEST(SmsKernel, OffGridMatchesTermByTermSum) {
  const SeparableSmsKernel k(SpectralGrid({-2, 3}, {-1, 1}, 1.7, 2.3), 2, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 50; ++i) {
    const double wx = u(rng);
    const double wy = u(rng);
    EXPECT_NEAR(sms_freq(k, wx, wy), oracle::sms_freq_sum(k, wx, wy), 1e-13);
  }
}

TEST(SmsKernel, SpatialValueAndSupport) {
  const SeparableSmsKernel k(grid(2, 2.0), 1, 1);
  EXPECT_NEAR(std::abs(sms_spatial(k, 0.0, 0.0) - cplx(25.0, 0.0)), 0.0, 1e-13);
  const SeparableSmsKernel k3(grid(2, 2.0), 3, 2);
  EXPECT_EQ(sms_spatial(k3, 1.01 * k3.half_support_x(), 0.0), cplx(0.0));
  EXPECT_EQ(sms_spatial(k3, 0.0, -1.01 * k3.half_support_y()), cplx(0.0));
  EXPECT_NE(sms_spatial(k3, 0.9 * k3.half_support_x(), 0.1), cplx(0.0));
}

TEST(SmsKernel, SeparableProductStructure) {
  const SeparableSmsKernel k(SpectralGrid({-2, 2}, {-1, 1}, 2.0, 3.0), 2, 3);
  const double x1 = 0.4, x2 = -1.1, y1 = 0.2, y2 = -0.6;
  const cplx lhs = sms_spatial(k, x1, y1) * sms_spatial(k, x2, y2);
  const cplx rhs = sms_spatial(k, x1, y2) * sms_spatial(k, x2, y1);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12 * std::abs(lhs));
}

TEST(SmsKernel, RejectsZeroOrder) {
  EXPECT_THROW(SeparableSmsKernel(grid(2, 2.0), 0, 0), ConfigError);
  EXPECT_THROW(SeparableSmsKernel(grid(2, 2.0), 1, 0), ConfigError);
}

TEST(NonsepKernel, PiSquaredTimesQOnGrid) {
  const auto g = grid(4, kPi / 0.99);
  const NonseparableKernel k(g, random_q(9, 9, 3));
  for (int k1 = -4; k1 <= 4; ++k1) {
    for (int k2 = -4; k2 <= 4; ++k2) {
      const cplx v = nonsep_freq(k, k1 * g.omega0x(), k2 * g.omega0y());
      const cplx want = kPi * kPi * k.q_at(k1, k2);
      EXPECT_LE(std::abs(v - want), 1e-12 * std::abs(want));
    }
  }
}

TEST(NonsepKernel, ZerosAtShiftedGridPoints) {
  const auto g = grid(2, 1.5);
  const NonseparableKernel k(g);
  for (int k1 = -2; k1 <= 2; ++k1) {
    for (int k2 = -2; k2 <= 2; ++k2) {
      for (int m : {-1, 1, 2}) {
        EXPECT_LE(std::abs(nonsep_freq(k, (k1 + 5 * m) * 1.5, k2 * 1.5)), 1e-13);
        EXPECT_LE(std::abs(nonsep_freq(k, k1 * 1.5, (k2 + 5 * m) * 1.5)), 1e-13);
      }
    }
  }
}

TEST(NonsepKernel, OffGridMatchesTermByTermSum) {
  const SpectralGrid g({-1, 2}, {-2, 2}, 2.5, 1.9);
  const NonseparableKernel k(g, random_q(4, 5, 9));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double wx = u(rng);
    const double wy = u(rng);
    const cplx want = oracle::nonsep_freq_sum(k, wx, wy);
    EXPECT_LE(std::abs(nonsep_freq(k, wx, wy) - want), 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(NonsepKernel, CentreValueIsPrefactor) {
  const SpectralGrid g({0, 0}, {0, 0}, 2.0, 3.0);
  const NonseparableKernel k(g);
  EXPECT_NEAR(nonsep_spatial(k, 0.0, 0.0).real(), 2.0 * 3.0 / 8.0, 1e-15);
}

TEST(NonsepKernel, RotatedSquareSupport) {
  const auto g = grid(4, kPi / 0.99);
  const NonseparableKernel k(g);
  const double w = g.omega0x();
  // Just outside |w x + w y| = 2 pi along the diagonal.
  const double d = 1.001 * kTwoPi / (2.0 * w);
  EXPECT_EQ(nonsep_spatial(k, d, d), cplx(0.0));
  EXPECT_EQ(nonsep_spatial(k, -d, -d), cplx(0.0));
  EXPECT_EQ(nonsep_spatial(k, d, -d), cplx(0.0));
  EXPECT_NE(nonsep_spatial(k, 0.99 * kTwoPi / (2.0 * w), 0.99 * kTwoPi / (2.0 * w)), cplx(0.0));
  // Vertices of the square lie on the axes at distance 2 pi / w0 = T0.
  EXPECT_NE(nonsep_spatial(k, 0.99 * g.period_x(), 0.0), cplx(0.0));
  EXPECT_EQ(nonsep_spatial(k, 1.01 * g.period_x(), 0.0), cplx(0.0));
}

TEST(NonsepKernel, EdgeValueIsHalf) {
  const auto g = grid(0, kPi);
  const NonseparableKernel k(g);
  const double full = nonsep_spatial(k, 0.0, 0.0).real();
  // x + y = 2 at w0 = pi is the edge s = 2 pi.
  EXPECT_NEAR(nonsep_spatial(k, 1.0, 1.0).real(), 0.5 * full, 1e-15);
  EXPECT_NEAR(nonsep_spatial(k, 2.0, 0.0).real(), 0.25 * full, 1e-15);
}

TEST(NonsepKernel, RejectsZeroCoefficient) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Ones(3, 3);
  q(1, 2) = 0.0;
  EXPECT_THROW(NonseparableKernel(grid(1, 1.0), q), ConfigError);
  EXPECT_THROW(NonseparableKernel(grid(1, 1.0), Eigen::MatrixXcd::Ones(2, 3)), ConfigError);
}

TEST(KernelSpec, ConjugateSymmetricForRealCoefficients) {
  const KernelSpec sep = SeparableSmsKernel(grid(3, 2.0), 2, 2);
  const KernelSpec non = NonseparableKernel(grid(3, 2.0));
  for (const KernelSpec* k : {&sep, &non}) {
    for (double x : {0.13, -0.7, 1.1}) {
      for (double y : {0.05, -0.4}) {
        EXPECT_NEAR(std::abs(k->impulse_response(x, y) - std::conj(k->impulse_response(-x, -y))), 0.0, 1e-12);
        EXPECT_NEAR(k->impulse_response(x, y).imag(), 0.0, 1e-12);
      }
    }
  }
}

TEST(KernelSpec, SeparableImpulseResponseScaled) {
  const SeparableSmsKernel s(SpectralGrid({-1, 1}, {-2, 2}, 2.0, 3.0), 2, 1);
  const KernelSpec k = s;
  const double t = s.grid().period_x() * s.grid().period_y();
  EXPECT_NEAR(std::abs(k.impulse_response(0.3, -0.2) - sms_spatial(s, 0.3, -0.2) / t), 0.0, 1e-14);
}

TEST(AliasCheck, SeparablePassesAtCriticalRate) {
  for (int r : {1, 2, 4}) {
    const KernelSpec k = SeparableSmsKernel(SpectralGrid({-3, 2}, {-2, 2}, 1.3, 2.1), r, 5 - r);
    const auto rep = alias_check(k, k.grid().critical_rate_x(), k.grid().critical_rate_y(), 3);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.worst_zero_violation, 1e-10);
    EXPECT_DOUBLE_EQ(rep.min_grid_magnitude, 1.0);
  }
}

TEST(AliasCheck, NonseparablePasses) {
  const KernelSpec k = NonseparableKernel(grid(4, kPi / 0.99));
  const auto rep = alias_check(k, k.grid().critical_rate_x(), k.grid().critical_rate_y(), 3);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.worst_zero_violation, 1e-10);
}

TEST(AliasCheck, DisplacedSincCentresFail) {
  const auto g = grid(2, 2.0);
  const FrequencyResponse broken = [&](double wx, double wy) {
    double sum = 0.0;
    for (int k1 = -2; k1 <= 2; ++k1) {
      for (int k2 = -2; k2 <= 2; ++k2) {
        sum += oracle::plain_sinc((wx - k1 * 2.0 - 1.0) / 2.0) * oracle::plain_sinc((wy - k2 * 2.0) / 2.0);
      }
    }
    return cplx(sum);
  };
  const auto rep = alias_check(broken, g, g.critical_rate_x(), g.critical_rate_y(), 3);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.worst_zero_violation, 1e-3);
}

TEST(AliasCheck, RejectsSubCriticalRate) {
  const KernelSpec k = NonseparableKernel(grid(2, 2.0));
  EXPECT_THROW(alias_check(k, 0.9 * k.grid().critical_rate_x(), k.grid().critical_rate_y(), 3), ConfigError);
  EXPECT_THROW(alias_check(k, k.grid().critical_rate_x(), 0.5 * k.grid().critical_rate_y(), 3), ConfigError);
  EXPECT_THROW(alias_check(k, k.grid().critical_rate_x(), k.grid().critical_rate_y(), 0), ConfigError);
}

TEST(FourierConsistency, SeparableFirstOrder) {
  const KernelSpec k = SeparableSmsKernel(grid(2, kPi / 0.99), 1, 1);
  const auto rep = fourier_consistency(k, minimum_cells_per_piece(k));
  EXPECT_LE(rep.max_relative_error, 1e-6);
  EXPECT_GT(rep.compared_frequencies, 0u);
}

TEST(FourierConsistency, Nonseparable) {
  const KernelSpec k = NonseparableKernel(grid(2, kPi / 0.99));
  const auto rep = fourier_consistency(k, minimum_cells_per_piece(k));
  EXPECT_LE(rep.max_relative_error, 1e-6);
}

TEST(FourierConsistency, RejectsCoarseStepAndSmallPad) {
  const KernelSpec k = SeparableSmsKernel(grid(2, 2.0), 1, 1);
  EXPECT_THROW(fourier_consistency(k, 1), ConfigError);
  EXPECT_THROW(fourier_consistency(k, minimum_cells_per_piece(k), 2), ConfigError);
}

TEST(Reproduction, ConstantByFirstOrderKernel) {
  const SeparableSmsKernel k(grid(2, kPi / 0.99), 1, 1);
  const auto res = reproduce_exponential(k, default_reproduction_request(k, 0, 0, 0, 0));
  EXPECT_LE(res.relative_residual, 1e-8);
}

TEST(Reproduction, EveryGridExponential) {
  const SeparableSmsKernel k(grid(2, kPi / 0.99), 2, 2);
  for (int k1 = -2; k1 <= 2; ++k1) {
    for (int k2 = -2; k2 <= 2; ++k2) {
      EXPECT_LE(reproduce_exponential(k, default_reproduction_request(k, 0, 0, k1, k2)).relative_residual, 1e-8);
    }
  }
}

TEST(Reproduction, PolynomialTimesExponential) {
  const SeparableSmsKernel k(grid(1, 2.0), 3, 2);
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 1; ++j) {
      const auto req = default_reproduction_request(k, i, j, 1, -1);
      const auto res = reproduce_exponential(k, req);
      EXPECT_LE(res.relative_residual, 1e-8);
      // Direct 2-D synthesis with the closed-form kernel at off-lattice points.
      for (double x : {-0.9, 0.2, 1.3}) {
        for (double y : {-1.1, 0.4}) {
          cplx sum = 0.0;
          for (int n1 = req.shifts_x.min; n1 <= req.shifts_x.max; ++n1) {
            for (int n2 = req.shifts_y.min; n2 <= req.shifts_y.max; ++n2) {
              sum += res.coeffs(n1 - req.shifts_x.min, n2 - req.shifts_y.min) *
                     sms_spatial(k, x - n1 * req.ts_x, y - n2 * req.ts_y);
            }
          }
          const cplx want = std::pow(x / req.ts_x, i) * std::pow(y / req.ts_y, j) * std::polar(1.0, 2.0 * x - 2.0 * y);
          EXPECT_LE(std::abs(sum - want), 1e-7 * std::max(1.0, std::abs(want)));
        }
      }
    }
  }
}

TEST(Reproduction, HighestDegreeIsOnlyApproximate) {
  const SeparableSmsKernel k(grid(2, kPi / 0.99), 1, 1);
  EXPECT_GT(reproduce_exponential(k, default_reproduction_request(k, 1, 0, 0, 0)).relative_residual, 1e-2);
}

TEST(Reproduction, ClosedFormCoefficientsForFirstOrder) {
  // c[n] = e^{j 2 pi (k1 n1 / |K1| + k2 n2 / |K2|)} / (|K1| |K2|) reproduces e^{j(k1 w0 x + k2 w0 y)}.
  const auto g = grid(2, kPi / 0.99);
  const SeparableSmsKernel k(g, 1, 1);
  const int k1 = 1, k2 = -2;
  const auto req = default_reproduction_request(k, 0, 0, k1, k2);
  double worst = 0.0;
  for (double x : {-0.77, -0.31, 0.0, 0.42, 0.93}) {
    for (double y : {-0.88, -0.12, 0.35, 0.61}) {
      cplx sum = 0.0;
      for (int n1 = req.shifts_x.min; n1 <= req.shifts_x.max; ++n1) {
        for (int n2 = req.shifts_y.min; n2 <= req.shifts_y.max; ++n2) {
          const cplx c = std::polar(1.0 / 25.0, kTwoPi * (k1 * n1 / 5.0 + k2 * n2 / 5.0));
          sum += c * sms_spatial(k, x - n1 * req.ts_x, y - n2 * req.ts_y);
        }
      }
      const cplx want = std::polar(1.0, k1 * g.omega0x() * x + k2 * g.omega0y() * y);
      worst = std::max(worst, std::abs(sum - want));
    }
  }
  EXPECT_LE(worst, 1e-12);
  EXPECT_LE(reproduce_exponential(k, req).relative_residual, 1e-8);
}

TEST(Reproduction, RejectsOutOfGridFrequency) {
  const SeparableSmsKernel k(grid(2, 2.0), 1, 1);
  auto req = default_reproduction_request(k, 0, 0, 0, 0);
  req.k1 = 3;
  EXPECT_THROW(reproduce_exponential(k, req), ConfigError);
  req.k1 = 0;
  req.i = -1;
  EXPECT_THROW(reproduce_exponential(k, req), ConfigError);
}

TEST(RotatedSincEnergy, TruncatedIntegralApproachesHalfAsOneOverWidth) {
  // The full-plane integral is 1/2; the tail outside [-W, W]^2 decays like 1/W.
  const double e50 = rotated_sinc_energy(50.0);
  const double e100 = rotated_sinc_energy(100.0);
  EXPECT_LT(e50, 0.5);
  EXPECT_LT(e50, e100);
  EXPECT_LT(e100, 0.5);
  EXPECT_NEAR((0.5 - e50) / (0.5 - e100), 2.0, 0.1);
}
