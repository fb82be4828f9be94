#pragma once

// Lieb-Robinson bound engine for equal-time connected correlations with
// correlated initial states: g(t), G(t), the radius-parameterized bound, its
// minimization over the ball radius, and the closed-form specializations.
//
// All bounds are normalized by ||A|| ||B|| (observable norms fixed to 1).

#include <span>
#include <vector>

#include "lrcorr/correlation_grid.hpp"
#include "lrcorr/init_corr.hpp"
#include "lrcorr/lattice_decay.hpp"

namespace lrcorr {

struct BoundConstants {
  double norm_phi;
  double const_C;
  double norm_F_val;
  DecayFunction decay;
  LatticeSpec lattice;

  // Production path: every scalar derived from (decay, lattice, interaction).
  static BoundConstants compute(const DecayFunction& decay, const LatticeSpec& lattice,
                                const PairInteractionSpec& interaction);
  // Test hook: inject scalars directly. Still validated positive and finite.
  static BoundConstants with_values(double norm_phi, double const_C, double norm_F_val,
                                    const DecayFunction& decay, const LatticeSpec& lattice);

  // 2 ||Phi|| C, the exponential growth rate of g.
  double growth_rate() const { return 2.0 * norm_phi * const_C; }
};

// exp(2 ||Phi|| C |t|) - 1 for disjoint supports, exp(2 ||Phi|| C |t|) otherwise.
double g_func(double t, const BoundConstants& bc, bool supports_disjoint);

// ((C + ||F||) / C) ||Phi|| int_0^|t| g(tau) dtau, disjoint-support g, closed form.
double big_G(double t, const BoundConstants& bc);

// (C + ||F||) / (2 C^2) exp(2 ||Phi|| C |t|) >= big_G(t).
double big_G_simple(double t, const BoundConstants& bc);

// Right side of the Lieb-Robinson commutator bound with ||A|| = ||B|| = 1.
double lr_commutator_bound(std::span<const int> X, std::span<const int> Y, double t,
                           const BoundConstants& bc);

// Cor(S_i(r) : S_j(r)) + 4 G(t) [tail_i(r) + tail_j(r)] with exact tail sums.
// Requires i != j and 2r < dist(i, j).
double bound_at_radius(int i, int j, int r, double t, const BoundConstants& bc,
                       const CorModel& cor);

struct OptimizedBound {
  double value;
  int argmin_r;
};

// min over integer r in [0, (dist-1)/2] of min(1, bound_at_radius); ties go to the smaller r.
OptimizedBound bound_optimized(int i, int j, double t, const BoundConstants& bc,
                               const CorModel& cor);

// Integral-approximation forms with the unspecified constant c made explicit.
// closed_form_exponential requires an ExpPoly decay (its rate a enters the exponent).
double closed_form_exponential(double r, double t, double dist_ij, const BoundConstants& bc,
                               double c, double cor_value);
double closed_form_powerlaw(double r, double t, const BoundConstants& bc, double c, double alpha,
                            double cor_value);

struct ClosedFormParams {
  double a = 1.0;
  double v = 1.0;
  double c_tilde = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double chi = 2.0;

  void validate() const;
  // v := 2 ||Phi|| C / a
  static double default_velocity(const BoundConstants& bc, double a);
};

// min{1, c~ exp(a (v|t| - |i - k|))} for sites +-i and a Bell pair at +-k.
double bound_block_closed(double t, int i, int k, const ClosedFormParams& p);

// min{1, min_r [c1 / (dist - 2r)^chi + c2 exp(a (v|t| - r))]}, exhaustive over r.
double bound_power_closed(double t, int dist_ij, const ClosedFormParams& p);

// One grid row: the measured pair and the initial-correlation model that applies to it.
struct BoundRow {
  int i;
  int j;
  CorModel cor;
};

// bound_optimized over rows x times. Distances are |i - j| per row.
CorrelationGrid bound_grid(std::span<const BoundRow> rows, std::span<const double> times,
                           const BoundConstants& bc, int threads = 1);

}  // namespace lrcorr
