#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "lrcorr/errors.hpp"
#include "lrcorr/lattice_decay.hpp"

using namespace lrcorr;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big_f(const DecayFunction& F, int d) {
  const Big x = d;
  const Big pre = F.prefactor();
  const Big p = F.parameter();
  if (F.kind() == DecayKind::kExpPoly) return pre * exp(-p * x) / ((1 + x) * (1 + x));
  return pre * pow(1 + x, -p);
}

std::vector<Big> big_table(const DecayFunction& F, int n) {
  std::vector<Big> t(n);
  for (int d = 0; d < n; ++d) t[d] = big_f(F, d);
  return t;
}

double big_norm_f(const DecayFunction& F, int n) {
  const auto t = big_table(F, n);
  Big best = 0;
  for (int i = 0; i < n; ++i) {
    Big s = 0;
    for (int j = 0; j < n; ++j) s += t[std::abs(i - j)];
    if (s > best) best = s;
  }
  return best.convert_to<double>();
}

double big_constant_c(const DecayFunction& F, int n) {
  const auto t = big_table(F, n);
  Big best = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Big s = 0;
      for (int k = 0; k < n; ++k) s += t[std::abs(i - k)] * t[std::abs(k - j)];
      s /= t[std::abs(i - j)];
      if (s > best) best = s;
    }
  }
  return best.convert_to<double>();
}

std::vector<DecayFunction> sample_decays() {
  return {DecayFunction::exp_poly(1.0), DecayFunction::exp_poly(0.3, 2.5),
          DecayFunction::power_law(2.0), DecayFunction::power_law(3.5, 0.7)};
}

}  // namespace

TEST(LatticeSpec, RejectsFewerThanTwoSites) {
  EXPECT_THROW(LatticeSpec(1), ValidationError);
  EXPECT_THROW(LatticeSpec(0), ValidationError);
  EXPECT_NO_THROW(LatticeSpec(2));
}

TEST(LatticeSpec, DistanceIsAMetric) {
  const LatticeSpec lat(9);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(lat.distance(i, i), 0);
    for (int j = 0; j < 9; ++j) {
      EXPECT_EQ(lat.distance(i, j), lat.distance(j, i));
      if (i != j) EXPECT_GT(lat.distance(i, j), 0);
      for (int k = 0; k < 9; ++k) {
        EXPECT_LE(lat.distance(i, j), lat.distance(i, k) + lat.distance(k, j));
      }
    }
  }
  EXPECT_TRUE(lat.contains(0));
  EXPECT_TRUE(lat.contains(8));
  EXPECT_FALSE(lat.contains(9));
  EXPECT_FALSE(lat.contains(-1));
}

TEST(DecayFunction, ValidatesParameters) {
  EXPECT_THROW(DecayFunction::exp_poly(0.0), ValidationError);
  EXPECT_THROW(DecayFunction::exp_poly(-1.0), ValidationError);
  EXPECT_THROW(DecayFunction::exp_poly(1.0, 0.0), ValidationError);
  EXPECT_THROW(DecayFunction::exp_poly(std::nan("")), ValidationError);
  EXPECT_THROW(DecayFunction::power_law(1.0), ValidationError);
  EXPECT_THROW(DecayFunction::power_law(0.5), ValidationError);
  EXPECT_THROW(DecayFunction::power_law(2.0, -1.0), ValidationError);
  EXPECT_THROW(DecayFunction::power_law(INFINITY), ValidationError);
  EXPECT_NO_THROW(DecayFunction::power_law(1.0001));
}

TEST(FEval, SpotValues) {
  EXPECT_EQ(f_eval(DecayFunction::power_law(2.0), 1.0), 0.25);
  EXPECT_EQ(f_eval(DecayFunction::exp_poly(1.0), 0.0), 1.0);
  const double oracle = (exp(Big(-3)) / 16).convert_to<double>();
  EXPECT_NEAR(f_eval(DecayFunction::exp_poly(1.0), 3.0), oracle, 1e-15 * oracle);
  EXPECT_NEAR(f_eval(DecayFunction::exp_poly(1.0), 3.0), 3.1117e-3, 1e-7);
}

TEST(FEval, StrictlyDecreasingAndPositive) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 60.0);
  for (const auto& F : sample_decays()) {
    for (int n = 0; n < 500; ++n) {
      double x = ux(rng), y = ux(rng);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      EXPECT_GT(f_eval(F, x), f_eval(F, y));
      EXPECT_GT(f_eval(F, y), 0.0);
    }
  }
}

TEST(FEval, PrefactorScalesValues) {
  const auto F = DecayFunction::power_law(2.5);
  const auto G = F.scaled(3.0);
  EXPECT_EQ(G.prefactor(), 3.0);
  for (double x : {0.0, 1.0, 7.5}) EXPECT_DOUBLE_EQ(G(x), 3.0 * F(x));
}

TEST(NormF, SmallChains) {
  EXPECT_EQ(norm_F(DecayFunction::power_law(2.0), LatticeSpec(3)), 1.5);
  EXPECT_NEAR(norm_F(DecayFunction::exp_poly(1.0), LatticeSpec(2)), 1.0 + std::exp(-1.0) / 4.0,
              1e-15);
  EXPECT_NEAR(norm_F(DecayFunction::exp_poly(1.0), LatticeSpec(2)), 1.09197, 1e-5);
}

TEST(NormF, InverseSquareChainMatchesBaselPartialSum) {
  // Centre row of 201 sites: 1 + 2 sum_{m=2}^{101} m^-2 = 1 + 2 (psi'(2) - psi'(102)).
  const double oracle =
      1.0 + 2.0 * (boost::math::trigamma(2.0L) - boost::math::trigamma(102.0L));
  const double value = norm_F(DecayFunction::power_law(2.0), LatticeSpec(201));
  EXPECT_NEAR(value, oracle, 1e-13);
  EXPECT_NEAR(value, 2.270164, 1e-6);
  // Below the infinite-chain limit pi^2/3 - 1.
  EXPECT_LT(value, std::numbers::pi * std::numbers::pi / 3.0 - 1.0);
}

TEST(NormF, MatchesMultiprecisionBruteForce) {
  for (const auto& F : sample_decays()) {
    for (int n : {2, 3, 5, 50}) {
      const double oracle = big_norm_f(F, n);
      EXPECT_NEAR(norm_F(F, LatticeSpec(n)), oracle, 1e-12 * oracle) << "N=" << n;
    }
  }
}

TEST(ConstantC, TwoSiteInverseSquare) {
  EXPECT_EQ(constant_C(DecayFunction::power_law(2.0), LatticeSpec(2)), 2.0);
  EXPECT_EQ(constant_C_exhaustive(DecayFunction::power_law(2.0), LatticeSpec(2)), 2.0);
}

TEST(ConstantC, ThreeSiteInverseSquarePinned) {
  // End pair (0, 2): (2 F(0) F(2) + F(1)^2) / F(2) = 2 + 9/16.
  EXPECT_DOUBLE_EQ(constant_C(DecayFunction::power_law(2.0), LatticeSpec(3)), 41.0 / 16.0);
}

TEST(ConstantC, MatchesMultiprecisionBruteForce) {
  for (const auto& F : sample_decays()) {
    for (int n : {2, 3, 5, 50}) {
      const double oracle = big_constant_c(F, n);
      EXPECT_NEAR(constant_C(F, LatticeSpec(n)), oracle, 1e-12 * oracle) << "N=" << n;
    }
  }
}

TEST(ConstantC, FastPathIsBitIdenticalToExhaustiveScan) {
  std::vector<std::pair<DecayFunction, int>> cases;
  for (const auto& F : sample_decays()) {
    for (int n : {2, 3, 4, 7, 16, 33, 100, 201}) cases.emplace_back(F, n);
  }
  cases.emplace_back(DecayFunction::exp_poly(1.0), 400);
  cases.emplace_back(DecayFunction::exp_poly(4.0), 300);  // deep underflow of F(d)
  cases.emplace_back(DecayFunction::power_law(1.05), 150);
  for (const auto& [F, n] : cases) {
    const LatticeSpec lat(n);
    EXPECT_EQ(constant_C(F, lat), constant_C_exhaustive(F, lat)) << "N=" << n;
  }
}

TEST(ConstantC, RandomDecaysAgreeWithExhaustiveScan) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.05, 3.0), ualpha(1.01, 6.0), upre(0.1, 10.0);
  std::uniform_int_distribution<int> un(2, 80);
  for (int trial = 0; trial < 40; ++trial) {
    const auto F = trial % 2 ? DecayFunction::exp_poly(ua(rng), upre(rng))
                             : DecayFunction::power_law(ualpha(rng), upre(rng));
    const LatticeSpec lat(un(rng));
    EXPECT_EQ(constant_C(F, lat), constant_C_exhaustive(F, lat));
  }
}

TEST(ConstantC, HomogeneousOfDegreeOneInPrefactor) {
  for (const auto& F : sample_decays()) {
    const LatticeSpec lat(40);
    const double base = constant_C(F, lat);
    EXPECT_EQ(constant_C(F.scaled(4.0), lat), 4.0 * base);
    EXPECT_NEAR(constant_C(F.scaled(3.7), lat), 3.7 * base, 1e-14 * 3.7 * base);
  }
}

TEST(ConstantC, AtLeastFOfZero) {
  for (const auto& F : sample_decays()) {
    for (int n : {2, 5, 30}) EXPECT_GE(constant_C(F, LatticeSpec(n)), F(0.0));
  }
}

TEST(Constants, NondecreasingInChainLength) {
  for (const auto& F : sample_decays()) {
    double prev_norm = 0.0, prev_c = 0.0;
    for (int n = 2; n <= 60; ++n) {
      const LatticeSpec lat(n);
      const double nf = norm_F(F, lat);
      const double c = constant_C(F, lat);
      EXPECT_GE(nf, prev_norm) << n;
      EXPECT_GE(c, prev_c) << n;
      prev_norm = nf;
      prev_c = c;
    }
  }
}

TEST(TailSum, SpotValuesAndEdges) {
  const auto F = DecayFunction::power_law(2.0);
  EXPECT_NEAR(tail_sum(F, LatticeSpec(5), 2, 1), 2.0 / 9.0, 1e-16);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(tail_sum(F, LatticeSpec(6), i, 5), 0.0);
    EXPECT_EQ(tail_sum(F, LatticeSpec(6), i, 50), 0.0);
  }
  EXPECT_THROW(tail_sum(F, LatticeSpec(6), 6, 1), ValidationError);
  EXPECT_THROW(tail_sum(F, LatticeSpec(6), 0, -1), ValidationError);
}

TEST(TailSum, PartitionsTheRowSum) {
  for (const auto& F : sample_decays()) {
    const LatticeSpec lat(31);
    for (int i : {0, 7, 15, 30}) {
      double row = 0.0;
      for (int j = 0; j < 31; ++j) row += F(lat.distance(i, j));
      for (int r = 0; r <= 31; ++r) {
        double ball = 0.0;
        for (int j = 0; j < 31; ++j) {
          if (lat.distance(i, j) <= r) ball += F(lat.distance(i, j));
        }
        EXPECT_NEAR(tail_sum(F, lat, i, r) + ball, row, 1e-14 * row);
      }
    }
  }
}

TEST(TailSum, NonincreasingInRadius) {
  for (const auto& F : sample_decays()) {
    const LatticeSpec lat(41);
    for (int i : {0, 20, 33}) {
      for (int r = 0; r < 45; ++r) EXPECT_LE(tail_sum(F, lat, i, r + 1), tail_sum(F, lat, i, r));
    }
  }
}

TEST(NormPhi, XXChainIsTwoOverFOfOne) {
  const auto F = DecayFunction::exp_poly(1.0);
  const LatticeSpec lat(201);
  const double value = norm_phi(PairInteractionSpec::xx_chain(1.0), F, lat);
  EXPECT_EQ(value, 2.0 / F(1.0));
  EXPECT_NEAR(value, 8.0 * std::numbers::e, 1e-13);
  EXPECT_NEAR(value, 21.746, 1e-3);
  EXPECT_EQ(norm_phi(PairInteractionSpec::xx_chain(1.0), DecayFunction::power_law(2.0), lat), 8.0);
}

TEST(NormPhi, ZeroInteractionAndDimerizedChain) {
  const auto F = DecayFunction::exp_poly(1.0);
  EXPECT_EQ(norm_phi(PairInteractionSpec::none(), F, LatticeSpec(10)), 0.0);
  EXPECT_EQ(norm_phi(PairInteractionSpec::dimerized_xx_chain(1.0, 0.5), F, LatticeSpec(10)),
            3.0 / F(1.0));
}

TEST(NormPhi, RejectsInvalidCouplings) {
  const auto F = DecayFunction::exp_poly(1.0);
  EXPECT_THROW(norm_phi(PairInteractionSpec{{-1.0}}, F, LatticeSpec(5)), ValidationError);
  EXPECT_THROW(norm_phi(PairInteractionSpec{{INFINITY}}, F, LatticeSpec(5)), ValidationError);
  // F(d) underflows to zero at d = 400 for a = 4: the ratio is unbounded.
  std::vector<double> couplings(400, 0.0);
  couplings.back() = 1.0;
  EXPECT_THROW(norm_phi(PairInteractionSpec{couplings}, DecayFunction::exp_poly(4.0),
                        LatticeSpec(500)),
               ValidationError);
}

TEST(NormPhi, PairTermNormIsTwo) {
  Eigen::Matrix2cd sx, sy;
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  const Eigen::Matrix4cd pair =
      Eigen::kroneckerProduct(sx, sx).eval() + Eigen::kroneckerProduct(sy, sy).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(pair);
  EXPECT_NEAR(solver.eigenvalues().cwiseAbs().maxCoeff(), 2.0, 1e-15);
  EXPECT_EQ(PairInteractionSpec::xx_chain(1.0).coupling_by_distance,
            std::vector<double>{2.0});
}

TEST(LatticeConstants, PureFunctions) {
  for (const auto& F : sample_decays()) {
    const LatticeSpec lat(57);
    EXPECT_EQ(norm_F(F, lat), norm_F(F, lat));
    EXPECT_EQ(constant_C(F, lat), constant_C(F, lat));
    EXPECT_EQ(tail_sum(F, lat, 3, 4), tail_sum(F, lat, 3, 4));
    EXPECT_EQ(f_eval(F, 2.5), f_eval(F, 2.5));
  }
}
