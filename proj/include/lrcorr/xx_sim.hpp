#pragma once

// Exact dynamics of the XX chain H = -J sum_m (sx_m sx_{m+1} + sy_m sy_{m+1}).
//
// Single-flip sector: with all spins up except one, H acts as a hopping matrix
// with amplitude -2J on the flip position (sx sx + sy sy = 2 (s+ s- + s- s+)).
// Jordan-Wigner picture: the chain is a free-fermion hopping model with the
// same matrix, and Gaussian states are evolved through their two-point matrix.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrcorr {

class HoppingMatrix {
 public:
  // h_{m,m+1} = -2J
  static HoppingMatrix uniform(int num_sites, double J = 1.0);
  // h_{m,m+1} = -2J (1 + eta (-1)^m)
  static HoppingMatrix dimerized(int num_sites, double J, double eta);
  static HoppingMatrix from_bonds(std::span<const double> bond_hoppings);

  int num_sites() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  // Bond hoppings h_{m,m+1}, m = 0..N-2.
  std::vector<double> bonds() const;
  // Upper bound 2 max|h_{m,m+1}| on the single-particle group velocity.
  double max_group_velocity() const;

 private:
  explicit HoppingMatrix(Eigen::MatrixXd m) : matrix_(std::move(m)) {}
  Eigen::MatrixXd matrix_;
};

// Eigenvalues and orthonormal eigenvectors (columns) of a hopping matrix.
struct Eigensystem {
  Eigen::VectorXd energies;
  Eigen::MatrixXd modes;
};

// Dense symmetric eigensolver; the production path.
Eigensystem diagonalize(const HoppingMatrix& h);
// Closed-form sine basis of the uniform open chain, energies -4J cos(pi q / (N+1)).
Eigensystem uniform_chain_eigensystem(int num_sites, double J = 1.0);

// Amplitudes c_m of the single flipped spin relative to the all-up reference.
struct MagnonState {
  Eigen::VectorXcd amplitudes;

  int num_sites() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

MagnonState make_prod_flip(int site, int num_sites);
MagnonState make_bell(int p, int q, int num_sites);

// Re-usable exp(-i h t) built from one eigendecomposition.
class MagnonPropagator {
 public:
  explicit MagnonPropagator(const HoppingMatrix& h);
  explicit MagnonPropagator(Eigensystem eig);

  MagnonState propagate(const MagnonState& state, double t) const;
  Eigen::MatrixXcd unitary(double t) const;
  const Eigensystem& eigensystem() const { return eig_; }

 private:
  Eigensystem eig_;
};

// c(t) = exp(-i h t) c(0)
MagnonState propagate(const MagnonState& state, const HoppingMatrix& h, double t);

// <sx_i sx_j>_c = 2 Re(conj(c_i) c_j); <sx> vanishes in the one-flip sector.
double corr_xx(const MagnonState& state, int i, int j);
// <sz_i sz_j>_c = -4 |c_i|^2 |c_j|^2
double corr_zz(const MagnonState& state, int i, int j);

// Writes `site,t,abs_amplitude` rows for the given snapshots.
void write_amplitude_profile(std::span<const MagnonState> states, std::span<const double> times,
                             std::ostream& out);

// Fermionic two-point matrix C_mn = <f_m^dag f_n>.
struct GaussianState {
  Eigen::MatrixXcd corr;

  int num_sites() const { return static_cast<int>(corr.rows()); }
  double particle_number() const { return corr.trace().real(); }
  // Largest deviation from Hermiticity and from spectrum in [0, 1].
  double hermiticity_defect() const;
  double spectrum_defect() const;
};

// Slater determinant of the N/2 lowest modes of the uniform chain.
GaussianState ground_state_half_filled(int num_sites, double J = 1.0);

// Evolution C(t) = U C U^dag, U = exp(+i h t), with one shared eigendecomposition of h.
class GaussianEvolver {
 public:
  GaussianEvolver(const GaussianState& initial, const HoppingMatrix& h);

  GaussianState state_at(double t) const;
  // Sub-block C(t)[rows, cols] without forming the full matrix.
  Eigen::MatrixXcd block(std::span<const int> rows, std::span<const int> cols, double t) const;

 private:
  Eigensystem eig_;
  Eigen::MatrixXcd corr_in_modes_;  // V^T C V
};

GaussianState evolve_gaussian(const GaussianState& state, const HoppingMatrix& h, double t);

// Wick contraction: <sz_i sz_j>_c = -4 |C_ij|^2, sz = 1 - 2n.
double corr_zz_gaussian(const GaussianState& state, int i, int j);
double corr_zz_from_entry(std::complex<double> c_ij);

}  // namespace lrcorr
