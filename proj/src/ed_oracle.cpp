#include "lrcorr/ed_oracle.hpp"

#include <cmath>
#include <string>

#include "lrcorr/errors.hpp"

namespace lrcorr {

namespace {

using cplx = std::complex<double>;

// Action of a single Pauli matrix on basis state `config` at `site`.
struct PauliImage {
  std::uint32_t config;
  cplx amplitude;
};

PauliImage apply_pauli(char which, int site, std::uint32_t config) {
  const std::uint32_t bit = std::uint32_t{1} << site;
  const bool down = (config & bit) != 0;
  switch (which) {
    case 'x':
      return {config ^ bit, 1.0};
    case 'y':
      // sy |up> = i |down>, sy |down> = -i |up>
      return {config ^ bit, down ? cplx(0.0, -1.0) : cplx(0.0, 1.0)};
    case 'z':
      return {config, down ? -1.0 : 1.0};
  }
  throw std::logic_error("unknown Pauli label");
}

Eigen::VectorXcd apply_product(const Eigen::VectorXcd& psi, std::span<const char> ops,
                               std::span<const int> sites) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (Eigen::Index s = 0; s < psi.size(); ++s) {
    if (psi(s) == 0.0) continue;
    auto config = static_cast<std::uint32_t>(s);
    cplx amp = psi(s);
    for (std::size_t k = ops.size(); k-- > 0;) {
      const auto image = apply_pauli(ops[k], sites[k], config);
      config = image.config;
      amp *= image.amplitude;
    }
    out(config) += amp;
  }
  return out;
}

double expectation(const Eigen::VectorXcd& psi, std::span<const char> ops,
                   std::span<const int> sites) {
  return psi.dot(apply_product(psi, ops, sites)).real();
}

}  // namespace

ExactDiagonalization::ExactDiagonalization(int num_sites, std::vector<double> bond_couplings)
    : num_sites_(num_sites) {
  if (num_sites < 2 || num_sites > kMaxSites) {
    throw ValidationError("ed_oracle supports 2.." + std::to_string(kMaxSites) +
                          " sites, got " + std::to_string(num_sites));
  }
  if (bond_couplings.size() != static_cast<std::size_t>(num_sites - 1)) {
    throw ValidationError("ed_oracle needs one coupling per bond");
  }
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (int m = 0; m + 1 < num_sites; ++m) {
      for (char op : {'x', 'y'}) {
        const auto first = apply_pauli(op, m + 1, static_cast<std::uint32_t>(s));
        const auto second = apply_pauli(op, m, first.config);
        h(second.config, s) += -bond_couplings[m] * first.amplitude * second.amplitude;
      }
    }
  }
  if (h.imag().cwiseAbs().maxCoeff() > 1e-14) {
    throw std::logic_error("XX Hamiltonian should be real in the z basis");
  }
  hamiltonian_ = h.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
  if (solver.info() != Eigen::Success) throw std::runtime_error("ED eigensolver failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

ExactDiagonalization ExactDiagonalization::xx_chain(int num_sites, double J) {
  if (num_sites < 2) throw ValidationError("ed_oracle needs at least 2 sites");
  return ExactDiagonalization(num_sites, std::vector<double>(num_sites - 1, J));
}

Eigen::VectorXcd ExactDiagonalization::state_from(std::span<const SpinAmplitude> amplitudes) const {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension()));
  for (const auto& a : amplitudes) {
    if (a.config >= dimension()) throw ValidationError("spin configuration out of range");
    psi(a.config) += a.amplitude;
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw ValidationError("initial state is not normalized");
  return psi;
}

Eigen::VectorXcd ExactDiagonalization::evolve(const Eigen::VectorXcd& psi0, double t) const {
  Eigen::VectorXcd coeff = eigenvectors_.transpose().cast<cplx>() * psi0;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::exp(cplx(0.0, -energies_(k) * t));
  }
  return eigenvectors_.cast<cplx>() * coeff;
}

Eigen::VectorXcd ExactDiagonalization::ground_state() const {
  return eigenvectors_.col(0).cast<cplx>();
}

double ExactDiagonalization::ground_state_gap() const { return energies_(1) - energies_(0); }

double ExactDiagonalization::connected(const Eigen::VectorXcd& psi, PairObservable obs) const {
  if (obs.i < 0 || obs.j < 0 || obs.i >= num_sites_ || obs.j >= num_sites_ || obs.i == obs.j) {
    throw ValidationError("ed_oracle observable needs two distinct sites in range");
  }
  const char op = obs.kind == PauliPair::kXX ? 'x' : 'z';
  const char pair_ops[] = {op, op};
  const int pair_sites[] = {obs.i, obs.j};
  const double both = expectation(psi, pair_ops, pair_sites);
  const double first = expectation(psi, std::span(pair_ops, 1), std::span(pair_sites, 1));
  const double second = expectation(psi, std::span(pair_ops, 1), std::span(pair_sites + 1, 1));
  return both - first * second;
}

double ed_oracle(int num_sites, std::span<const SpinAmplitude> initial, double t,
                 PairObservable obs) {
  const auto ed = ExactDiagonalization::xx_chain(num_sites);
  return ed.connected(ed.evolve(ed.state_from(initial), t), obs);
}

}  // namespace lrcorr
