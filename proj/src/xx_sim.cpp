#include "lrcorr/xx_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "lrcorr/correlation_grid.hpp"
#include "lrcorr/errors.hpp"

namespace lrcorr {

namespace {

void require_site(int site, int num_sites, const char* what) {
  if (site < 0 || site >= num_sites) {
    throw ValidationError(std::string(what) + ": site " + std::to_string(site) +
                          " outside chain of " + std::to_string(num_sites) + " sites");
  }
}

void require_distinct(int i, int j) {
  if (i == j) throw ValidationError("correlator needs distinct sites i != j");
}

}  // namespace

HoppingMatrix HoppingMatrix::uniform(int num_sites, double J) {
  if (num_sites < 2) throw ValidationError("hopping matrix needs at least 2 sites");
  return from_bonds(std::vector<double>(num_sites - 1, -2.0 * J));
}

HoppingMatrix HoppingMatrix::dimerized(int num_sites, double J, double eta) {
  if (num_sites < 2) throw ValidationError("hopping matrix needs at least 2 sites");
  std::vector<double> bonds(num_sites - 1);
  for (int m = 0; m + 1 < num_sites; ++m) {
    bonds[m] = -2.0 * J * (1.0 + eta * (m % 2 == 0 ? 1.0 : -1.0));
  }
  return from_bonds(bonds);
}

HoppingMatrix HoppingMatrix::from_bonds(std::span<const double> bond_hoppings) {
  const auto n = static_cast<Eigen::Index>(bond_hoppings.size()) + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    m(k, k + 1) = m(k + 1, k) = bond_hoppings[k];
  }
  return HoppingMatrix(std::move(m));
}

std::vector<double> HoppingMatrix::bonds() const {
  std::vector<double> out(num_sites() - 1);
  for (int k = 0; k + 1 < num_sites(); ++k) out[k] = matrix_(k, k + 1);
  return out;
}

double HoppingMatrix::max_group_velocity() const {
  double largest = 0.0;
  for (double b : bonds()) largest = std::max(largest, std::abs(b));
  return 2.0 * largest;
}

Eigensystem diagonalize(const HoppingMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigensystem uniform_chain_eigensystem(int num_sites, double J) {
  const double n1 = num_sites + 1.0;
  Eigensystem eig{Eigen::VectorXd(num_sites), Eigen::MatrixXd(num_sites, num_sites)};
  const double norm = std::sqrt(2.0 / n1);
  for (int q = 1; q <= num_sites; ++q) {
    eig.energies(q - 1) = -4.0 * J * std::cos(std::numbers::pi * q / n1);
    for (int m = 0; m < num_sites; ++m) {
      eig.modes(m, q - 1) = norm * std::sin(std::numbers::pi * q * (m + 1) / n1);
    }
  }
  return eig;
}

MagnonState make_prod_flip(int site, int num_sites) {
  if (num_sites < 2) throw ValidationError("magnon state needs at least 2 sites");
  require_site(site, num_sites, "prod_flip");
  MagnonState s{Eigen::VectorXcd::Zero(num_sites)};
  s.amplitudes(site) = 1.0;
  return s;
}

MagnonState make_bell(int p, int q, int num_sites) {
  if (num_sites < 2) throw ValidationError("magnon state needs at least 2 sites");
  require_site(p, num_sites, "bell");
  require_site(q, num_sites, "bell");
  if (p == q) throw ValidationError("bell pair sites must differ");
  MagnonState s{Eigen::VectorXcd::Zero(num_sites)};
  s.amplitudes(p) = s.amplitudes(q) = std::numbers::sqrt2 / 2.0;
  return s;
}

MagnonPropagator::MagnonPropagator(const HoppingMatrix& h) : eig_(diagonalize(h)) {}
MagnonPropagator::MagnonPropagator(Eigensystem eig) : eig_(std::move(eig)) {}

MagnonState MagnonPropagator::propagate(const MagnonState& state, double t) const {
  if (state.num_sites() != eig_.energies.size()) {
    throw ValidationError("state and hopping matrix sizes differ");
  }
  if (t == 0.0) return state;
  const Eigen::VectorXcd phases =
      (eig_.energies.cast<std::complex<double>>() * std::complex<double>(0.0, -t))
          .array()
          .exp()
          .matrix();
  Eigen::VectorXcd in_modes = eig_.modes.transpose().cast<std::complex<double>>() * state.amplitudes;
  in_modes = in_modes.cwiseProduct(phases);
  return MagnonState{eig_.modes.cast<std::complex<double>>() * in_modes};
}

Eigen::MatrixXcd MagnonPropagator::unitary(double t) const {
  const Eigen::MatrixXcd v = eig_.modes.cast<std::complex<double>>();
  Eigen::VectorXcd phases(eig_.energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, -eig_.energies(k) * t));
  }
  return v * phases.asDiagonal() * v.transpose();
}

MagnonState propagate(const MagnonState& state, const HoppingMatrix& h, double t) {
  return MagnonPropagator(h).propagate(state, t);
}

double corr_xx(const MagnonState& state, int i, int j) {
  require_site(i, state.num_sites(), "corr_xx");
  require_site(j, state.num_sites(), "corr_xx");
  require_distinct(i, j);
  return 2.0 * (std::conj(state.amplitudes(i)) * state.amplitudes(j)).real();
}

double corr_zz(const MagnonState& state, int i, int j) {
  require_site(i, state.num_sites(), "corr_zz");
  require_site(j, state.num_sites(), "corr_zz");
  require_distinct(i, j);
  return -4.0 * std::norm(state.amplitudes(i)) * std::norm(state.amplitudes(j));
}

void write_amplitude_profile(std::span<const MagnonState> states, std::span<const double> times,
                             std::ostream& out) {
  if (states.size() != times.size()) throw ValidationError("one time per snapshot required");
  out << "site,t,abs_amplitude\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (int m = 0; m < states[k].num_sites(); ++m) {
      out << m << ',' << format_double(times[k]) << ','
          << format_double(std::abs(states[k].amplitudes(m))) << '\n';
    }
  }
}

double GaussianState::hermiticity_defect() const {
  return (corr - corr.adjoint()).cwiseAbs().maxCoeff();
}

double GaussianState::spectrum_defect() const {
  const Eigen::MatrixXcd hermitian = 0.5 * (corr + corr.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});
}

GaussianState ground_state_half_filled(int num_sites, double J) {
  if (num_sites < 2 || num_sites % 2 != 0) {
    throw ValidationError("half filling needs an even number of sites, got " +
                          std::to_string(num_sites));
  }
  const Eigensystem eig = diagonalize(HoppingMatrix::uniform(num_sites, J));
  // Eigen returns ascending eigenvalues: the first N/2 columns are the filled modes.
  const Eigen::MatrixXd filled = eig.modes.leftCols(num_sites / 2);
  return GaussianState{(filled * filled.transpose()).cast<std::complex<double>>()};
}

GaussianEvolver::GaussianEvolver(const GaussianState& initial, const HoppingMatrix& h)
    : eig_(diagonalize(h)) {
  if (initial.num_sites() != h.num_sites()) {
    throw ValidationError("state and hopping matrix sizes differ");
  }
  const Eigen::MatrixXcd v = eig_.modes.cast<std::complex<double>>();
  corr_in_modes_ = v.transpose() * initial.corr * v;
}

Eigen::MatrixXcd GaussianEvolver::block(std::span<const int> rows, std::span<const int> cols,
                                        double t) const {
  const auto n = eig_.energies.size();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, eig_.energies(k) * t));
  }
  auto gather = [&](std::span<const int> sites, bool conjugate) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(sites.size()), n);
    for (std::size_t r = 0; r < sites.size(); ++r) {
      require_site(sites[r], static_cast<int>(n), "gaussian block");
      for (Eigen::Index k = 0; k < n; ++k) {
        out(static_cast<Eigen::Index>(r), k) =
            eig_.modes(sites[r], k) * (conjugate ? std::conj(phases(k)) : phases(k));
      }
    }
    return out;
  };
  const Eigen::MatrixXcd left = gather(rows, false);
  const Eigen::MatrixXcd right = gather(cols, true);
  return left * corr_in_modes_ * right.transpose();
}

GaussianState GaussianEvolver::state_at(double t) const {
  const Eigen::MatrixXcd v = eig_.modes.cast<std::complex<double>>();
  Eigen::VectorXcd phases(eig_.energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(std::complex<double>(0.0, eig_.energies(k) * t));
  }
  // U C U^dag = (V D) (V^T C V) (V D)^dag
  const Eigen::MatrixXcd vd = v * phases.asDiagonal();
  return GaussianState{vd * corr_in_modes_ * vd.adjoint()};
}

GaussianState evolve_gaussian(const GaussianState& state, const HoppingMatrix& h, double t) {
  return GaussianEvolver(state, h).state_at(t);
}

double corr_zz_from_entry(std::complex<double> c_ij) { return -4.0 * std::norm(c_ij); }

double corr_zz_gaussian(const GaussianState& state, int i, int j) {
  require_site(i, state.num_sites(), "corr_zz_gaussian");
  require_site(j, state.num_sites(), "corr_zz_gaussian");
  require_distinct(i, j);
  return corr_zz_from_entry(state.corr(i, j));
}

}  // namespace lrcorr
