#pragma once

// Brute-force verifier: the full 2^N-dimensional XX Hamiltonian built from
// Pauli matrices, dense diagonalization, and direct expectation values. It
// shares no code with the single-flip or Jordan-Wigner fast paths.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrcorr {

// Basis configuration: bit m set means spin down at site m.
struct SpinAmplitude {
  std::uint32_t config;
  std::complex<double> amplitude;
};

enum class PauliPair { kXX, kZZ };

struct PairObservable {
  PauliPair kind;
  int i;
  int j;
};

class ExactDiagonalization {
 public:
  static constexpr int kMaxSites = 12;

  // H = -sum_m J_m (sx_m sx_{m+1} + sy_m sy_{m+1}), one coupling per bond.
  ExactDiagonalization(int num_sites, std::vector<double> bond_couplings);
  static ExactDiagonalization xx_chain(int num_sites, double J = 1.0);

  int num_sites() const { return num_sites_; }
  std::size_t dimension() const { return std::size_t{1} << num_sites_; }
  const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }

  Eigen::VectorXcd state_from(std::span<const SpinAmplitude> amplitudes) const;
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const;
  // Lowest eigenvector and the gap above it.
  Eigen::VectorXcd ground_state() const;
  double ground_state_gap() const;

  // <O_i O_j> - <O_i><O_j> in state psi.
  double connected(const Eigen::VectorXcd& psi, PairObservable obs) const;

 private:
  int num_sites_;
  Eigen::MatrixXd hamiltonian_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd eigenvectors_;
};

// One-shot convenience wrapper around ExactDiagonalization::xx_chain(N).
double ed_oracle(int num_sites, std::span<const SpinAmplitude> initial, double t,
                 PairObservable obs);

}  // namespace lrcorr
