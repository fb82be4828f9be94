#pragma once

// Scenario configuration: a flat TOML file of typed dotted keys, validated
// against a fixed schema before any computation.
//
//   name = "fig3_bell_pm5"
//   lattice.num_sites = 201
//   decay.kind = "exp_poly"
//   decay.a = 1.0
//   outputs.emit_closed_form = true

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrcorr/init_corr.hpp"
#include "lrcorr/lattice_decay.hpp"
#include "lrcorr/lr_bounds.hpp"

namespace lrcorr {

enum class SimulationKind { kMagnonProd, kMagnonBell, kGaussianQuench };
enum class ObservableKind { kXX, kZZ };

struct GridSpec {
  double t_min = 0.0;
  double t_max = 0.0;
  int t_steps = 1;
  int delta_min = 1;
  int delta_max = 1;
  int delta_step = 1;

  std::vector<double> times() const;
  std::vector<int> deltas() const;
  double time_step() const { return t_steps > 1 ? (t_max - t_min) / (t_steps - 1) : 0.0; }
};

struct SimulationSpec {
  SimulationKind kind = SimulationKind::kMagnonProd;
  ObservableKind observable = ObservableKind::kXX;
  int flip_site = 0;        // magnon_prod
  int p = 0;                // magnon_bell, fixed pair
  int q = 0;
  bool bell_adjacent = false;  // magnon_bell: pair at (i+1, j-1) for each measured (i, j)
  double eta = 0.5;         // gaussian_quench dimerization
};

struct ClosedFormSpec {
  ClosedFormParams params;
  bool velocity_given = false;
};

struct OutputSpec {
  std::string directory;
  bool emit_bound = true;
  bool emit_exact = true;
  bool emit_closed_form = false;
};

struct MeasuredPair {
  int delta;
  int i;
  int j;
};

struct ScenarioConfig {
  std::string name;
  LatticeSpec lattice{2};
  DecayFunction decay = DecayFunction::exp_poly(1.0);
  double J = 1.0;
  // Absent only for magnon_bell with bell_adjacent, where the model follows each pair.
  std::optional<CorModel> cor_model;
  SimulationSpec simulation;
  GridSpec grid;
  int center = 1;
  std::optional<ClosedFormSpec> closed_form;
  OutputSpec outputs;

  // Measured sites i = center - floor(delta/2), j = i + delta, per grid distance.
  std::vector<MeasuredPair> measured_pairs() const;
  CorModel cor_for(const MeasuredPair& pair) const;
  // Interaction of the Hamiltonian that drives the dynamics.
  PairInteractionSpec interaction() const;
};

// Errors (syntax, unknown keys, wrong types, inconsistent geometry) are
// ValidationErrors naming the offending key path.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string to_string(SimulationKind kind);
std::string to_string(ObservableKind kind);

}  // namespace lrcorr
