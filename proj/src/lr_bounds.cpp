#include "lrcorr/lr_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "lrcorr/errors.hpp"
#include "lrcorr/parallel.hpp"

namespace lrcorr {

namespace {

void require_positive_finite(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(what) + " must be positive and finite");
  }
}

// e^x - 1 - x without cancellation for small x.
double expm1_minus_x(double x) {
  if (std::abs(x) < 0.1) {
    double term = x * x / 2.0;
    double sum = 0.0;
    for (int n = 3; n < 30 && term != 0.0; ++n) {
      sum += term;
      term *= x / n;
    }
    return sum;
  }
  if (x < 1.0) return std::expm1(x) - x;
  // Same exp() as big_G_simple, so the computed G never exceeds it.
  const double e = std::exp(x);
  if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
  return e - (1.0 + x);
}

// 4 G(t) * tails, with an empty complement contributing nothing even when G saturates.
double dynamical_term(double big_g, double tails) {
  if (tails == 0.0) return 0.0;
  return 4.0 * big_g * tails;
}

void check_pair(int i, int j, const LatticeSpec& lattice) {
  if (!lattice.contains(i) || !lattice.contains(j)) {
    throw ValidationError("site pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside the lattice");
  }
  if (i == j) throw ValidationError("bound requires distinct sites i != j");
}

}  // namespace

BoundConstants BoundConstants::compute(const DecayFunction& decay, const LatticeSpec& lattice,
                                       const PairInteractionSpec& interaction) {
  return with_values(lrcorr::norm_phi(interaction, decay, lattice), constant_C(decay, lattice),
                     norm_F(decay, lattice), decay, lattice);
}

BoundConstants BoundConstants::with_values(double norm_phi_val, double const_C_val,
                                           double norm_F_val, const DecayFunction& decay,
                                           const LatticeSpec& lattice) {
  require_positive_finite(norm_phi_val, "||Phi||");
  require_positive_finite(const_C_val, "C");
  require_positive_finite(norm_F_val, "||F||");
  return BoundConstants{norm_phi_val, const_C_val, norm_F_val, decay, lattice};
}

double g_func(double t, const BoundConstants& bc, bool supports_disjoint) {
  const double x = bc.growth_rate() * std::abs(t);
  return supports_disjoint ? std::expm1(x) : std::exp(x);
}

namespace {

// (C + ||F||) / (2 C^2), shared so that big_G <= big_G_simple also holds after rounding.
double g_prefactor(const BoundConstants& bc) {
  return (bc.const_C + bc.norm_F_val) / (2.0 * bc.const_C * bc.const_C);
}

}  // namespace

// ((C + ||F||) / C) ||Phi|| (e^x - 1 - x) / (2 ||Phi|| C), x = 2 ||Phi|| C |t|.
double big_G(double t, const BoundConstants& bc) {
  return g_prefactor(bc) * expm1_minus_x(bc.growth_rate() * std::abs(t));
}

double big_G_simple(double t, const BoundConstants& bc) {
  return g_prefactor(bc) * std::exp(bc.growth_rate() * std::abs(t));
}

double lr_commutator_bound(std::span<const int> X, std::span<const int> Y, double t,
                           const BoundConstants& bc) {
  if (X.empty() || Y.empty()) throw ValidationError("observable supports must be nonempty");
  double pair_sum = 0.0;
  int min_dist = std::numeric_limits<int>::max();
  for (int i : X) {
    for (int j : Y) {
      if (!bc.lattice.contains(i) || !bc.lattice.contains(j)) {
        throw ValidationError("support site outside the lattice");
      }
      const int d = bc.lattice.distance(i, j);
      min_dist = std::min(min_dist, d);
      pair_sum += bc.decay(d);
    }
  }
  return 2.0 / bc.const_C * g_func(t, bc, min_dist > 0) * pair_sum;
}

double bound_at_radius(int i, int j, int r, double t, const BoundConstants& bc,
                       const CorModel& cor) {
  check_pair(i, j, bc.lattice);
  if (r < 0 || 2 * r >= bc.lattice.distance(i, j)) {
    throw ValidationError("radius " + std::to_string(r) + " makes the balls around " +
                          std::to_string(i) + " and " + std::to_string(j) + " overlap");
  }
  const double tails = tail_sum(bc.decay, bc.lattice, i, r) + tail_sum(bc.decay, bc.lattice, j, r);
  return cor_between_balls(cor, i, j, r) + dynamical_term(big_G(t, bc), tails);
}

OptimizedBound bound_optimized(int i, int j, double t, const BoundConstants& bc,
                               const CorModel& cor) {
  check_pair(i, j, bc.lattice);
  const int r_max = (bc.lattice.distance(i, j) - 1) / 2;
  OptimizedBound best{std::numeric_limits<double>::infinity(), 0};
  for (int r = 0; r <= r_max; ++r) {
    const double value = std::min(1.0, bound_at_radius(i, j, r, t, bc, cor));
    if (value < best.value) best = {value, r};
  }
  return best;
}

double closed_form_exponential(double r, double t, double dist_ij, const BoundConstants& bc,
                               double c, double cor_value) {
  if (!(r > 0.0)) throw ValidationError("closed_form_exponential needs r > 0");
  if (!(dist_ij > 0.0)) throw ValidationError("closed_form_exponential needs dist > 0");
  if (bc.decay.kind() != DecayKind::kExpPoly) {
    throw ValidationError("closed_form_exponential needs an exp_poly decay function");
  }
  const double a = bc.decay.parameter();
  const double C = bc.const_C;
  const double exponent = bc.growth_rate() * std::abs(t) - a * r;
  return cor_value + 4.0 * c * (C + bc.norm_F_val) * std::exp(exponent) / (C * C * r * r);
}

double closed_form_powerlaw(double r, double t, const BoundConstants& bc, double c, double alpha,
                            double cor_value) {
  if (!(r > 0.0)) throw ValidationError("closed_form_powerlaw needs r > 0");
  if (!(alpha > LatticeSpec::kDimension)) {
    throw ValidationError("closed_form_powerlaw needs alpha > 1");
  }
  const double C = bc.const_C;
  return cor_value + 4.0 * c * (C + bc.norm_F_val) * std::exp(bc.growth_rate() * std::abs(t)) /
                         (C * C * std::pow(r, alpha - LatticeSpec::kDimension));
}

void ClosedFormParams::validate() const {
  require_positive_finite(a, "closed_form.a");
  require_positive_finite(v, "closed_form.v");
  require_positive_finite(c_tilde, "closed_form.c_tilde");
  require_positive_finite(c2, "closed_form.c2");
  if (!(c1 >= 0.0) || !std::isfinite(c1)) throw ValidationError("closed_form.c1 must be >= 0");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw ValidationError("closed_form.chi must be >= 0");
}

double ClosedFormParams::default_velocity(const BoundConstants& bc, double a) {
  require_positive_finite(a, "closed_form.a");
  return bc.growth_rate() / a;
}

double bound_block_closed(double t, int i, int k, const ClosedFormParams& p) {
  if (i < 0 || k < 0) throw ValidationError("bound_block_closed needs i, k >= 0");
  return std::min(1.0, p.c_tilde * std::exp(p.a * (p.v * std::abs(t) - std::abs(i - k))));
}

double bound_power_closed(double t, int dist_ij, const ClosedFormParams& p) {
  if (dist_ij < 1) throw ValidationError("bound_power_closed needs dist >= 1");
  const int r_max = (dist_ij - 1) / 2;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= r_max; ++r) {
    const double value = p.c1 / std::pow(dist_ij - 2.0 * r, p.chi) +
                         p.c2 * std::exp(p.a * (p.v * std::abs(t) - r));
    best = std::min(best, value);
  }
  return std::min(1.0, best);
}

CorrelationGrid bound_grid(std::span<const BoundRow> rows, std::span<const double> times,
                           const BoundConstants& bc, int threads) {
  if (rows.empty() || times.empty()) throw ValidationError("bound_grid needs nonempty axes");
  std::vector<int> distances;
  for (const auto& row : rows) distances.push_back(bc.lattice.distance(row.i, row.j));
  CorrelationGrid grid("bound", distances, std::vector<double>(times.begin(), times.end()));
  grid.argmin_r.assign(grid.values.size(), 0);

  std::vector<double> big_g(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) big_g[ti] = big_G(times[ti], bc);

  parallel_for(rows.size(), threads, [&](std::size_t di) {
    const auto& row = rows[di];
    try {
      check_pair(row.i, row.j, bc.lattice);
      const int r_max = (distances[di] - 1) / 2;
      // Radius-dependent pieces do not depend on t.
      std::vector<double> cor(r_max + 1), tails(r_max + 1);
      for (int r = 0; r <= r_max; ++r) {
        cor[r] = cor_between_balls(row.cor, row.i, row.j, r);
        tails[r] = tail_sum(bc.decay, bc.lattice, row.i, r) +
                   tail_sum(bc.decay, bc.lattice, row.j, r);
      }
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        double best = std::numeric_limits<double>::infinity();
        int best_r = 0;
        for (int r = 0; r <= r_max; ++r) {
          const double value = std::min(1.0, cor[r] + dynamical_term(big_g[ti], tails[r]));
          if (value < best) {
            best = value;
            best_r = r;
          }
        }
        grid.at(di, ti) = best;
        grid.argmin_r[grid.index(di, ti)] = best_r;
      }
    } catch (const ValidationError& e) {
      throw ValidationError("bound grid row delta=" + std::to_string(distances[di]) + " (sites " +
                            std::to_string(row.i) + ", " + std::to_string(row.j) +
                            "): " + e.what());
    }
  });
  return grid;
}

}  // namespace lrcorr
