#pragma once

// Lattice geometry, spatial decay functions, and the three lattice constants
// (||F||, C, ||Phi||) that parameterize every Lieb-Robinson bound.

#include <cstdlib>
#include <vector>

namespace lrcorr {

// Open one-dimensional chain with sites 0..N-1 and graph distance |i-j|.
class LatticeSpec {
 public:
  static constexpr int kDimension = 1;

  explicit LatticeSpec(int num_sites);

  int num_sites() const { return num_sites_; }
  bool contains(int site) const { return site >= 0 && site < num_sites_; }
  int distance(int i, int j) const { return std::abs(i - j); }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  int num_sites_;
};

enum class DecayKind { kExpPoly, kPowerLaw };

// F(x) = prefactor * exp(-a x) / (1 + x)^(D+1)   (ExpPoly)
// F(x) = prefactor * (1 + x)^(-alpha)            (PowerLaw, alpha > D)
class DecayFunction {
 public:
  static DecayFunction exp_poly(double a, double prefactor = 1.0);
  static DecayFunction power_law(double alpha, double prefactor = 1.0);

  DecayKind kind() const { return kind_; }
  // Decay rate a (ExpPoly) or exponent alpha (PowerLaw).
  double parameter() const { return parameter_; }
  double prefactor() const { return prefactor_; }

  double operator()(double x) const;

  // Same family, prefactor multiplied by `factor`.
  DecayFunction scaled(double factor) const;

  friend bool operator==(const DecayFunction&, const DecayFunction&) = default;

 private:
  DecayFunction(DecayKind kind, double parameter, double prefactor)
      : kind_(kind), parameter_(parameter), prefactor_(prefactor) {}

  DecayKind kind_;
  double parameter_;
  double prefactor_;
};

// Operator norms of the two-site interaction terms, indexed by distance:
// coupling_by_distance[d-1] = ||Phi({i, i+d})||, d >= 1. Distances past the
// end of the vector carry no interaction.
struct PairInteractionSpec {
  std::vector<double> coupling_by_distance;

  // Uniform XX chain -J sum (sx sx + sy sy): ||sx sx + sy sy|| = 2.
  static PairInteractionSpec xx_chain(double J);
  // Bond-alternating XX chain with couplings J (1 +- eta).
  static PairInteractionSpec dimerized_xx_chain(double J, double eta);
  static PairInteractionSpec none() { return {}; }
};

double f_eval(const DecayFunction& F, double x);

// max_i sum_j F(dist(i,j)), by full scan over i.
double norm_F(const DecayFunction& F, const LatticeSpec& lattice);

// max_{i,j} sum_k F(dist(i,k)) F(dist(k,j)) / F(dist(i,j)).
// Uses a sliding-window pass per distance class to locate the maximizing pairs
// and then re-evaluates the candidates exactly as constant_C_exhaustive does,
// so both functions return bit-identical results.
double constant_C(const DecayFunction& F, const LatticeSpec& lattice);
double constant_C_exhaustive(const DecayFunction& F, const LatticeSpec& lattice);

// Sum of F(dist(i,j)) over all j outside the closed ball of radius r around i.
double tail_sum(const DecayFunction& F, const LatticeSpec& lattice, int i, int r);

// sup_{i != j} ||Phi({i,j})|| / F(dist(i,j)) over the distances present in the lattice.
double norm_phi(const PairInteractionSpec& interaction, const DecayFunction& F,
                const LatticeSpec& lattice);

}  // namespace lrcorr
