#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "lrcorr/errors.hpp"
#include "lrcorr/xx_sim.hpp"

using namespace lrcorr;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// J_n(x) from its power series in 50-digit arithmetic.
double bessel_series(int n, double x) {
  const Big half = Big(x) / 2;
  Big term = pow(half, n);
  for (int k = 1; k <= n; ++k) term /= k;
  Big sum = 0;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= -half * half / ((k + 1) * (k + 1 + n));
  }
  return sum.convert_to<double>();
}

MagnonState random_state(int n, std::mt19937_64& rng, bool real_only = false) {
  std::normal_distribution<double> g;
  MagnonState s{Eigen::VectorXcd(n)};
  for (int m = 0; m < n; ++m) s.amplitudes(m) = {g(rng), real_only ? 0.0 : g(rng)};
  s.amplitudes.normalize();
  return s;
}

// <f_i^dag f_j> of the half-filled open chain as an explicit sum over the filled sine modes.
double open_chain_half_filled_entry(int n, int i, int j) {
  const double k = std::numbers::pi / (n + 1);
  double sum = 0.0;
  for (int q = 1; q <= n / 2; ++q) sum += std::sin(k * q * (i + 1)) * std::sin(k * q * (j + 1));
  return 2.0 * sum / (n + 1);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(HoppingMatrix, UniformAndDimerizedBonds) {
  const auto u = HoppingMatrix::uniform(6, 1.0);
  for (double b : u.bonds()) EXPECT_EQ(b, -2.0);
  EXPECT_EQ(u.max_group_velocity(), 4.0);
  const auto d = HoppingMatrix::dimerized(6, 1.0, 0.5);
  EXPECT_EQ(d.bonds(), (std::vector<double>{-3.0, -1.0, -3.0, -1.0, -3.0}));
  EXPECT_EQ(d.max_group_velocity(), 6.0);
  const auto& m = d.matrix();
  EXPECT_EQ(m, m.transpose());
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      if (std::abs(r - c) != 1) EXPECT_EQ(m(r, c), 0.0);
    }
  }
  EXPECT_THROW(HoppingMatrix::uniform(1), ValidationError);
}

TEST(Eigensystem, DenseSolverMatchesSineBasis) {
  for (int n : {2, 7, 50, 201}) {
    const auto dense = diagonalize(HoppingMatrix::uniform(n, 1.0));
    const auto closed = uniform_chain_eigensystem(n, 1.0);
    // Closed-form energies ascend in q as well.
    EXPECT_LT((dense.energies - closed.energies).cwiseAbs().maxCoeff(), 1e-10) << n;
    // Compare the projectors, which do not depend on eigenvector signs.
    const Eigen::MatrixXd pd = dense.modes * dense.energies.asDiagonal() * dense.modes.transpose();
    const Eigen::MatrixXd pc = closed.modes * closed.energies.asDiagonal() * closed.modes.transpose();
    EXPECT_LT((pd - pc).cwiseAbs().maxCoeff(), 1e-10) << n;
    EXPECT_LT((pc - HoppingMatrix::uniform(n, 1.0).matrix()).cwiseAbs().maxCoeff(), 1e-10);
    for (double t : {0.3, 2.0}) {
      EXPECT_LT((MagnonPropagator(dense).unitary(t) - MagnonPropagator(closed).unitary(t))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-10);
    }
  }
}

TEST(MagnonState, Constructors) {
  const auto flip = make_prod_flip(3, 7);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(7);
  expected(3) = 1.0;
  EXPECT_EQ(flip.amplitudes, expected);
  const auto bell = make_bell(2, 8, 11);
  for (int m = 0; m < 11; ++m) {
    const double want = (m == 2 || m == 8) ? 1.0 / std::sqrt(2.0) : 0.0;
    EXPECT_NEAR(std::abs(bell.amplitudes(m)), want, 2e-16);
  }
  EXPECT_NEAR(bell.norm(), 1.0, 1e-15);
  EXPECT_EQ(flip.norm(), 1.0);
  EXPECT_THROW(make_prod_flip(7, 7), ValidationError);
  EXPECT_THROW(make_bell(2, 2, 7), ValidationError);
  EXPECT_THROW(make_bell(-1, 2, 7), ValidationError);
}

TEST(Propagate, TimeZeroIsIdentityAndNormIsPreserved) {
  std::mt19937_64 rng(8);
  const auto h = HoppingMatrix::uniform(40, 1.0);
  const MagnonPropagator prop(h);
  const auto s = random_state(40, rng);
  EXPECT_EQ(prop.propagate(s, 0.0).amplitudes, s.amplitudes);
  EXPECT_NEAR(prop.propagate(s, 3.7).norm(), 1.0, 1e-13);
  const auto back = prop.propagate(prop.propagate(s, 1.3), -1.3);
  EXPECT_LT((back.amplitudes - s.amplitudes).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((propagate(s, h, 0.8).amplitudes - prop.propagate(s, 0.8).amplitudes).cwiseAbs().maxCoeff(),
            1e-15);
  const Eigen::MatrixXcd u = prop.unitary(2.2);
  EXPECT_LT((u * u.adjoint() - Eigen::MatrixXcd::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, BesselSeriesOracleIsConsistentWithStdlib) {
  for (int n = 0; n <= 40; ++n) {
    EXPECT_NEAR(std::cyl_bessel_j(double(n), 8.0), bessel_series(n, 8.0), 1e-13) << n;
  }
}

TEST(Propagate, CentralFlipSpreadsAsBesselFunctions) {
  const int n = 201, c = 100;
  const double t = 2.0;
  const auto s = MagnonPropagator(HoppingMatrix::uniform(n, 1.0)).propagate(make_prod_flip(c, n), t);
  double worst = 0.0;
  for (int m = 20; m <= 180; ++m) {
    const double oracle = std::abs(bessel_series(std::abs(m - c), 4.0 * t));
    worst = std::max(worst, std::abs(std::abs(s.amplitudes(m)) - oracle));
  }
  EXPECT_LT(worst, 1e-6);
  // Phase convention: c_m = i^|m| J_|m|(4 J t).
  EXPECT_NEAR(s.amplitudes(c + 3).real(), 0.0, 1e-12);
  EXPECT_NEAR(s.amplitudes(c + 3).imag(), -bessel_series(3, 8.0), 1e-12);
}

TEST(Correlators, InitialValues) {
  const int n = 41;
  const auto flip = make_prod_flip(20, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      EXPECT_EQ(corr_xx(flip, i, j), 0.0);
      EXPECT_EQ(corr_zz(flip, i, j), 0.0);
    }
  }
  const auto bell = make_bell(10, 30, n);
  EXPECT_NEAR(corr_xx(bell, 10, 30), 1.0, 1e-15);
  EXPECT_NEAR(corr_zz(bell, 10, 30), -1.0, 1e-15);
  // Pair on the sites next to the measured ones.
  const auto adjacent = make_bell(11, 29, n);
  EXPECT_EQ(corr_xx(adjacent, 10, 30), 0.0);
  EXPECT_THROW(corr_xx(bell, 4, 4), ValidationError);
  EXPECT_THROW(corr_zz(bell, 4, 41), ValidationError);
}

TEST(Correlators, ZzBoundedByOne) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_state(12, rng);
    for (int i = 0; i < 12; ++i) {
      for (int j = i + 1; j < 12; ++j) {
        EXPECT_LE(std::abs(corr_zz(s, i, j)), 1.0);
        EXPECT_LE(std::abs(corr_xx(s, i, j)), 1.0 + 1e-15);
      }
    }
  }
}

TEST(Correlators, TimeReversalForRealInitialStates) {
  std::mt19937_64 rng(21);
  const MagnonPropagator prop(HoppingMatrix::uniform(30, 1.0));
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_state(30, rng, true);
    for (double t : {0.4, 1.7, 4.0}) {
      const auto fwd = prop.propagate(s, t);
      const auto bwd = prop.propagate(s, -t);
      for (int i = 0; i < 30; i += 3) {
        for (int j = i + 1; j < 30; j += 4) {
          EXPECT_NEAR(corr_xx(fwd, i, j), corr_xx(bwd, i, j), 1e-12);
          EXPECT_NEAR(corr_zz(fwd, i, j), corr_zz(bwd, i, j), 1e-12);
        }
      }
    }
  }
}

TEST(Correlators, ReflectionSymmetricStatesGiveMirroredValues) {
  const int n = 61;
  const MagnonPropagator prop(HoppingMatrix::uniform(n, 1.0));
  for (const auto& init : {make_bell(12, n - 1 - 12, n), make_prod_flip(30, n)}) {
    for (double t : {0.7, 2.5}) {
      const auto s = prop.propagate(init, t);
      for (int i = 0; i < n; i += 2) {
        for (int j = i + 1; j < n; j += 3) {
          EXPECT_NEAR(corr_xx(s, i, j), corr_xx(s, n - 1 - j, n - 1 - i), 1e-10);
          EXPECT_NEAR(corr_zz(s, i, j), corr_zz(s, n - 1 - j, n - 1 - i), 1e-10);
        }
      }
    }
  }
}

TEST(Correlators, NegligibleOutsideTheMagnonLightcone) {
  const int n = 201, c = 100;
  const MagnonPropagator prop(HoppingMatrix::uniform(n, 1.0));
  for (double t : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const auto s = prop.propagate(make_prod_flip(c, n), t);
    const double edge = 4.0 * t * 1.3 + 8.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::max(std::abs(i - c), std::abs(j - c)) > edge) {
          ASSERT_LT(std::abs(corr_xx(s, i, j)), 1e-4) << "t=" << t << " i=" << i << " j=" << j;
        }
      }
    }
  }
}

TEST(AmplitudeProfile, WritesOneRowPerSiteAndSnapshot) {
  const std::vector<MagnonState> states{make_prod_flip(1, 3), make_prod_flip(2, 3)};
  const std::vector<double> times{0.0, 0.5};
  std::ostringstream out;
  write_amplitude_profile(states, times, out);
  EXPECT_EQ(out.str(), "site,t,abs_amplitude\n0,0,0\n1,0,1\n2,0,0\n0,0.5,0\n1,0.5,0\n2,0.5,1\n");
  EXPECT_THROW(write_amplitude_profile(states, std::vector<double>{0.0}, out), ValidationError);
}

TEST(GaussianState, TwoSiteGroundState) {
  const auto gs = ground_state_half_filled(2);
  EXPECT_LT((gs.corr - Eigen::MatrixXcd::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(corr_zz_gaussian(gs, 0, 1), -1.0, 1e-15);
  EXPECT_THROW(ground_state_half_filled(3), ValidationError);
}

TEST(GaussianState, EmptyAndFullStatesHaveNoFluctuations) {
  const GaussianState empty{Eigen::MatrixXcd::Zero(6, 6)};
  const GaussianState full{Eigen::MatrixXcd::Identity(6, 6)};
  EXPECT_EQ(corr_zz_gaussian(empty, 1, 4), 0.0);
  EXPECT_EQ(corr_zz_gaussian(full, 1, 4), 0.0);
  EXPECT_THROW(corr_zz_gaussian(full, 2, 2), ValidationError);
}

TEST(GaussianState, GroundStateIsAHalfFilledProjector) {
  for (int n : {4, 10, 100}) {
    const auto gs = ground_state_half_filled(n);
    EXPECT_NEAR(gs.particle_number(), n / 2.0, 1e-10);
    EXPECT_LT(gs.hermiticity_defect(), 1e-14);
    EXPECT_LT(gs.spectrum_defect(), 1e-10);
    EXPECT_LT((gs.corr * gs.corr - gs.corr).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GaussianState, GroundStateCorrelationsAlternateAndDecayAsInverseSquare) {
  const int n = 400, c = 200;
  const auto gs = ground_state_half_filled(n);
  std::vector<double> lx, ly;
  for (int d = 10; d <= 40; ++d) {
    const int i = c - d / 2, j = i + d;
    const double zz = std::abs(corr_zz_gaussian(gs, i, j));
    if (d % 2 == 0) {
      // Particle-hole symmetry of the bipartite chain.
      EXPECT_LT(zz, 1e-20) << d;
    } else {
      lx.push_back(std::log(d));
      ly.push_back(std::log(zz));
    }
    const double c_ij = open_chain_half_filled_entry(n, i, j);
    EXPECT_NEAR(corr_zz_gaussian(gs, i, j), -4.0 * c_ij * c_ij, 1e-12) << d;
  }
  EXPECT_NEAR(least_squares_slope(lx, ly), -2.0, 0.2);
}

TEST(GaussianEvolution, StationaryUnderTheSameHamiltonian) {
  const int n = 100;
  const auto gs = ground_state_half_filled(n);
  for (double t : {0.0, 1.0, 3.0}) {
    const auto later = evolve_gaussian(gs, HoppingMatrix::uniform(n, 1.0), t);
    EXPECT_LT((later.corr - gs.corr).cwiseAbs().maxCoeff(), 1e-10) << t;
  }
}

TEST(GaussianEvolution, QuenchConservesParticlesAndPositivity) {
  const int n = 200;
  const auto gs = ground_state_half_filled(n);
  const GaussianEvolver ev(gs, HoppingMatrix::dimerized(n, 1.0, 0.5));
  for (double t : {0.5, 5.0}) {
    const auto st = ev.state_at(t);
    EXPECT_NEAR(st.particle_number(), gs.particle_number(), 1e-10);
    EXPECT_LT(st.hermiticity_defect(), 1e-12);
    EXPECT_LT(st.spectrum_defect(), 1e-10);
  }
}

TEST(GaussianEvolution, BlockMatchesFullState) {
  const int n = 60;
  const GaussianEvolver ev(ground_state_half_filled(n), HoppingMatrix::dimerized(n, 1.0, 0.3));
  const std::vector<int> rows{3, 17, 30}, cols{5, 29, 44, 59};
  for (double t : {0.0, 0.9, 4.0}) {
    const auto full = ev.state_at(t);
    const auto block = ev.block(rows, cols, t);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        EXPECT_LT(std::abs(block(r, c) - full.corr(rows[r], cols[c])), 1e-12);
      }
    }
  }
  EXPECT_THROW(ev.block(std::vector<int>{60}, cols, 1.0), ValidationError);
}

TEST(GaussianEvolution, ParticleHoleSpectrumInUnitInterval) {
  std::mt19937_64 rng(2);
  const int n = 30;
  const auto gs = ground_state_half_filled(n);
  std::uniform_real_distribution<double> u(-0.9, 0.9), ut(0.0, 10.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto st = evolve_gaussian(gs, HoppingMatrix::dimerized(n, 1.0, u(rng)), ut(rng));
    EXPECT_LT(st.spectrum_defect(), 1e-10);
  }
}
