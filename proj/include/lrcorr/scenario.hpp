#pragma once

// Scenario execution: bound, exact and closed-form grids for one config,
// dominance certification, arrival times, and artifact emission.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrcorr/correlation_grid.hpp"
#include "lrcorr/scenario_config.hpp"

namespace lrcorr {

// Cells with bound < |exact| - kDominanceSlack count as violations.
inline constexpr double kDominanceSlack = 1e-9;

struct ViolatingCell {
  int delta;
  double t;
  double bound;
  double exact;
};

struct DominanceReport {
  std::string scenario;
  std::size_t num_cells = 0;
  std::size_t num_violations = 0;
  double worst_margin = 0.0;  // min over cells of bound - |exact|
  std::vector<ViolatingCell> violating_cells;

  nlohmann::ordered_json to_json() const;
};

// Throws ValidationError when the axes differ.
DominanceReport verify_dominance(const CorrelationGrid& bound, const CorrelationGrid& exact,
                                 const std::string& scenario = "");

// First time per distance with |value| >= threshold, linearly interpolated
// between bracketing grid times; nullopt if never reached.
std::map<int, std::optional<double>> arrival_times(const CorrelationGrid& grid, double threshold);

enum class RunMode { kBound, kSimulate, kVerify };

struct RunOptions {
  RunMode mode = RunMode::kVerify;
  int threads = 1;
};

struct ScenarioResult {
  std::vector<CorrelationGrid> grids;  // labels: "bound", "closed_form", "exact"
  std::optional<DominanceReport> report;
  nlohmann::ordered_json summary;

  const CorrelationGrid* find(const std::string& label) const;
};

// Individual grids, usable without a full run.
CorrelationGrid exact_grid(const ScenarioConfig& cfg, int threads = 1);
CorrelationGrid scenario_bound_grid(const ScenarioConfig& cfg, const BoundConstants& bc,
                                    int threads = 1);
CorrelationGrid closed_form_grid(const ScenarioConfig& cfg, const ClosedFormParams& params);

// Throws ValidationError if excitations can reach within kBoundaryMargin sites
// of a chain end during the simulated window.
inline constexpr int kBoundaryMargin = 10;
void check_boundary_guard(const ScenarioConfig& cfg);

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

// `<name>__<label>.csv` per grid selected by cfg.outputs, report.json when a
// report exists, summary.json. Throws IoError naming the path on failure.
void emit_outputs(const ScenarioResult& result, const ScenarioConfig& cfg,
                  const std::filesystem::path& directory);

// `delta,t_arrival` rows; an empty field means the threshold is never reached.
void write_arrivals_csv(const std::map<int, std::optional<double>>& arrivals,
                        const std::filesystem::path& path);

struct ConstantsRow {
  int num_sites;
  double norm_F;
  double const_C;
  double norm_phi;
};

// ||F||, C, ||Phi|| on chains of increasing length up to the configured one.
std::vector<ConstantsRow> constants_table(const ScenarioConfig& cfg);

}  // namespace lrcorr
