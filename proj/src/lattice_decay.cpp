#include "lrcorr/lattice_decay.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrcorr/errors.hpp"

namespace lrcorr {

LatticeSpec::LatticeSpec(int num_sites) : num_sites_(num_sites) {
  if (num_sites < 2) {
    throw ValidationError("lattice needs at least 2 sites, got " + std::to_string(num_sites));
  }
}

DecayFunction DecayFunction::exp_poly(double a, double prefactor) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("exp_poly decay rate a must be positive and finite");
  }
  if (!(prefactor > 0.0) || !std::isfinite(prefactor)) {
    throw ValidationError("decay prefactor must be positive and finite");
  }
  return DecayFunction(DecayKind::kExpPoly, a, prefactor);
}

DecayFunction DecayFunction::power_law(double alpha, double prefactor) {
  if (!(alpha > LatticeSpec::kDimension) || !std::isfinite(alpha)) {
    throw ValidationError("power_law exponent alpha must exceed the lattice dimension 1");
  }
  if (!(prefactor > 0.0) || !std::isfinite(prefactor)) {
    throw ValidationError("decay prefactor must be positive and finite");
  }
  return DecayFunction(DecayKind::kPowerLaw, alpha, prefactor);
}

double DecayFunction::operator()(double x) const {
  const double base = 1.0 + x;
  switch (kind_) {
    case DecayKind::kExpPoly:
      // (1+x)^(D+1) with D = 1
      return prefactor_ * std::exp(-parameter_ * x) / (base * base);
    case DecayKind::kPowerLaw:
      return prefactor_ * std::pow(base, -parameter_);
  }
  return 0.0;
}

DecayFunction DecayFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw ValidationError("decay scale factor must be positive");
  return DecayFunction(kind_, parameter_, prefactor_ * factor);
}

PairInteractionSpec PairInteractionSpec::xx_chain(double J) {
  return PairInteractionSpec{{2.0 * std::abs(J)}};
}

PairInteractionSpec PairInteractionSpec::dimerized_xx_chain(double J, double eta) {
  return PairInteractionSpec{{2.0 * std::abs(J) * (1.0 + std::abs(eta))}};
}

double f_eval(const DecayFunction& F, double x) { return F(x); }

namespace {

// F at integer distances 0..N-1, plus log F for the underflow-safe ratio path.
struct DecayTable {
  std::vector<double> value;
  std::vector<double> log_value;

  DecayTable(const DecayFunction& F, int n) : value(n), log_value(n) {
    for (int d = 0; d < n; ++d) {
      value[d] = F(d);
      const double x = d;
      log_value[d] = F.kind() == DecayKind::kExpPoly
                         ? std::log(F.prefactor()) - F.parameter() * x - 2.0 * std::log1p(x)
                         : std::log(F.prefactor()) - F.parameter() * std::log1p(x);
    }
  }

  // F(a) F(b) / F(d)
  double ratio(int a, int b, int d) const {
    if (value[d] >= 1e-280) return (value[a] * value[b]) / value[d];
    return std::exp(log_value[a] + log_value[b] - log_value[d]);
  }
};

double reproducibility_sum(const DecayTable& table, int n, int i, int j) {
  const int d = std::abs(i - j);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += table.ratio(std::abs(i - k), std::abs(k - j), d);
  }
  return sum;
}

}  // namespace

double norm_F(const DecayFunction& F, const LatticeSpec& lattice) {
  const int n = lattice.num_sites();
  const DecayTable table(F, n);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += table.value[lattice.distance(i, j)];
    best = std::max(best, sum);
  }
  return best;
}

double constant_C_exhaustive(const DecayFunction& F, const LatticeSpec& lattice) {
  const int n = lattice.num_sites();
  const DecayTable table(F, n);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      best = std::max(best, reproducibility_sum(table, n, i, j));
    }
  }
  return best;
}

double constant_C(const DecayFunction& F, const LatticeSpec& lattice) {
  const int n = lattice.num_sites();
  const DecayTable table(F, n);

  // Pass 1: sliding window over each distance class d (pairs (i, i+d)).
  // Shifting a pair by one site adds the k = -1 term and drops the k = N-1 term.
  std::vector<std::vector<double>> approx(n);
  double approx_max = 0.0;
  for (int d = 0; d < n; ++d) {
    auto& row = approx[d];
    row.resize(n - d);
    long double s = reproducibility_sum(table, n, 0, d);
    row[0] = static_cast<double>(s);
    for (int i = 0; i + 1 < n - d; ++i) {
      const int j = i + d;
      s += table.ratio(i + 1, j + 1, d);
      s -= table.ratio(n - 1 - i, n - 1 - j, d);
      row[i + 1] = static_cast<double>(s);
    }
    for (double v : row) approx_max = std::max(approx_max, v);
  }

  // Pass 2: exact re-evaluation of every pair within rounding distance of the max.
  // S(i,j) == S(j,i) bitwise, so i <= j covers the exhaustive scan.
  const double cutoff = approx_max * (1.0 - 1e-9);
  double best = 0.0;
  for (int d = 0; d < n; ++d) {
    for (int i = 0; i < n - d; ++i) {
      if (approx[d][i] >= cutoff) {
        best = std::max(best, reproducibility_sum(table, n, i, i + d));
      }
    }
  }
  return best;
}

double tail_sum(const DecayFunction& F, const LatticeSpec& lattice, int i, int r) {
  if (!lattice.contains(i)) throw ValidationError("tail_sum: site out of range");
  if (r < 0) throw ValidationError("tail_sum: negative radius");
  double sum = 0.0;
  for (int j = 0; j < lattice.num_sites(); ++j) {
    const int d = lattice.distance(i, j);
    if (d > r) sum += F(d);
  }
  return sum;
}

double norm_phi(const PairInteractionSpec& interaction, const DecayFunction& F,
                const LatticeSpec& lattice) {
  double best = 0.0;
  const auto& couplings = interaction.coupling_by_distance;
  for (std::size_t idx = 0; idx < couplings.size(); ++idx) {
    const double c = couplings[idx];
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError("interaction norms must be finite and nonnegative");
    }
    const int d = static_cast<int>(idx) + 1;
    if (d >= lattice.num_sites() || c == 0.0) continue;
    const double ratio = c / F(d);
    if (!std::isfinite(ratio)) {
      throw ValidationError("interaction norm / F(d) is unbounded at d = " + std::to_string(d));
    }
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace lrcorr
