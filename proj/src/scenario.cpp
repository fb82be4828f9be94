#include "lrcorr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lrcorr/errors.hpp"
#include "lrcorr/parallel.hpp"
#include "lrcorr/xx_sim.hpp"

namespace lrcorr {

namespace {

std::vector<int> grid_distances(const ScenarioConfig& cfg) { return cfg.grid.deltas(); }

double magnon_observable(const MagnonState& s, ObservableKind kind, int i, int j) {
  return kind == ObservableKind::kXX ? corr_xx(s, i, j) : corr_zz(s, i, j);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::ordered_json decay_json(const DecayFunction& decay) {
  nlohmann::ordered_json j;
  if (decay.kind() == DecayKind::kExpPoly) {
    j["kind"] = "exp_poly";
    j["a"] = decay.parameter();
  } else {
    j["kind"] = "power_law";
    j["alpha"] = decay.parameter();
  }
  j["prefactor"] = decay.prefactor();
  return j;
}

}  // namespace

nlohmann::ordered_json DominanceReport::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["num_cells"] = num_cells;
  j["num_violations"] = num_violations;
  j["worst_margin"] = worst_margin;
  j["slack"] = kDominanceSlack;
  j["slack_rationale"] =
      "absolute tolerance on bound >= |exact|; separates genuine violations from "
      "floating-point rounding in the bound and exact pipelines";
  j["violating_cells"] = nlohmann::ordered_json::array();
  for (const ViolatingCell& c : violating_cells) {
    j["violating_cells"].push_back(
        {{"delta", c.delta}, {"t", c.t}, {"bound", c.bound}, {"exact", c.exact}});
  }
  return j;
}

DominanceReport verify_dominance(const CorrelationGrid& bound, const CorrelationGrid& exact,
                                 const std::string& scenario) {
  if (!bound.same_axes(exact)) {
    throw ValidationError("dominance check needs identical (delta, t) axes on both grids");
  }
  DominanceReport report;
  report.scenario = scenario;
  report.num_cells = bound.values.size();
  report.worst_margin = report.num_cells ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t di = 0; di < bound.num_distances(); ++di) {
    for (std::size_t ti = 0; ti < bound.num_times(); ++ti) {
      const double b = bound.at(di, ti);
      const double e = exact.at(di, ti);
      const double margin = b - std::abs(e);
      // NaN on either side counts as a violation.
      if (!(b >= std::abs(e) - kDominanceSlack)) {
        report.violating_cells.push_back({bound.distances[di], bound.times[ti], b, e});
        report.worst_margin = std::isnan(margin) ? margin : std::min(report.worst_margin, margin);
      } else if (!std::isnan(report.worst_margin)) {
        report.worst_margin = std::min(report.worst_margin, margin);
      }
    }
  }
  report.num_violations = report.violating_cells.size();
  return report;
}

std::map<int, std::optional<double>> arrival_times(const CorrelationGrid& grid, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ValidationError("arrival threshold must be a positive finite number");
  }
  std::map<int, std::optional<double>> out;
  for (std::size_t di = 0; di < grid.num_distances(); ++di) {
    std::optional<double> arrival;
    for (std::size_t ti = 0; ti < grid.num_times(); ++ti) {
      const double v = std::abs(grid.at(di, ti));
      if (v < threshold) continue;
      if (ti == 0) {
        arrival = grid.times[0];
      } else {
        const double prev = std::abs(grid.at(di, ti - 1));
        const double t0 = grid.times[ti - 1];
        const double t1 = grid.times[ti];
        arrival = t0 + (threshold - prev) / (v - prev) * (t1 - t0);
      }
      break;
    }
    out[grid.distances[di]] = arrival;
  }
  return out;
}

const CorrelationGrid* ScenarioResult::find(const std::string& label) const {
  for (const CorrelationGrid& g : grids) {
    if (g.label == label) return &g;
  }
  return nullptr;
}

void check_boundary_guard(const ScenarioConfig& cfg) {
  const int n = cfg.lattice.num_sites();
  const SimulationSpec& sim = cfg.simulation;
  const auto pairs = cfg.measured_pairs();

  // Sites whose excitations must stay clear of the chain ends.
  std::vector<int> sources;
  double velocity;
  if (sim.kind == SimulationKind::kGaussianQuench) {
    velocity = HoppingMatrix::dimerized(n, cfg.J, sim.eta).max_group_velocity();
    for (const MeasuredPair& m : pairs) sources.insert(sources.end(), {m.i, m.j});
  } else {
    velocity = HoppingMatrix::uniform(n, cfg.J).max_group_velocity();
    if (sim.kind == SimulationKind::kMagnonProd) {
      sources.push_back(sim.flip_site);
    } else if (!sim.bell_adjacent) {
      sources.insert(sources.end(), {sim.p, sim.q});
    } else {
      for (const MeasuredPair& m : pairs) sources.insert(sources.end(), {m.i + 1, m.j - 1});
    }
  }
  if (sources.empty()) return;
  const auto [lo, hi] = std::minmax_element(sources.begin(), sources.end());
  const double reach = velocity * cfg.grid.t_max;
  const double left = *lo - reach;
  const double right = *hi + reach;
  if (left < kBoundaryMargin || right > n - 1 - kBoundaryMargin) {
    throw ValidationError(
        "boundary guard: lightcone from sites [" + std::to_string(*lo) + ", " +
        std::to_string(*hi) + "] at velocity " + format_double(velocity) + " reaches [" +
        format_double(left) + ", " + format_double(right) + "] by t = " +
        format_double(cfg.grid.t_max) + ", closer than " + std::to_string(kBoundaryMargin) +
        " sites to the ends of the " + std::to_string(n) +
        "-site chain; enlarge lattice.num_sites or shorten grid.t_max");
  }
}

CorrelationGrid exact_grid(const ScenarioConfig& cfg, int threads) {
  check_boundary_guard(cfg);
  const int n = cfg.lattice.num_sites();
  const SimulationSpec& sim = cfg.simulation;
  const auto pairs = cfg.measured_pairs();
  CorrelationGrid grid("exact", grid_distances(cfg), cfg.grid.times());

  if (sim.kind == SimulationKind::kGaussianQuench) {
    const GaussianEvolver evolver(ground_state_half_filled(n, cfg.J),
                                  HoppingMatrix::dimerized(n, cfg.J, sim.eta));
    std::vector<int> rows, cols;
    for (const MeasuredPair& m : pairs) {
      rows.push_back(m.i);
      cols.push_back(m.j);
    }
    parallel_for(grid.num_times(), threads, [&](std::size_t ti) {
      const Eigen::MatrixXcd block = evolver.block(rows, cols, grid.times[ti]);
      for (std::size_t di = 0; di < pairs.size(); ++di) {
        const auto k = static_cast<Eigen::Index>(di);
        grid.at(di, ti) = corr_zz_from_entry(block(k, k));
      }
    });
    return grid;
  }

  const MagnonPropagator propagator(HoppingMatrix::uniform(n, cfg.J));
  std::vector<MagnonState> initial;
  if (sim.kind == SimulationKind::kMagnonProd) {
    initial.push_back(make_prod_flip(sim.flip_site, n));
  } else if (!sim.bell_adjacent) {
    initial.push_back(make_bell(sim.p, sim.q, n));
  } else {
    for (const MeasuredPair& m : pairs) initial.push_back(make_bell(m.i + 1, m.j - 1, n));
  }
  parallel_for(grid.num_times(), threads, [&](std::size_t ti) {
    const double t = grid.times[ti];
    if (initial.size() == 1) {
      const MagnonState s = propagator.propagate(initial[0], t);
      for (std::size_t di = 0; di < pairs.size(); ++di) {
        grid.at(di, ti) = magnon_observable(s, sim.observable, pairs[di].i, pairs[di].j);
      }
    } else {
      for (std::size_t di = 0; di < pairs.size(); ++di) {
        const MagnonState s = propagator.propagate(initial[di], t);
        grid.at(di, ti) = magnon_observable(s, sim.observable, pairs[di].i, pairs[di].j);
      }
    }
  });
  return grid;
}

CorrelationGrid scenario_bound_grid(const ScenarioConfig& cfg, const BoundConstants& bc,
                                    int threads) {
  std::vector<BoundRow> rows;
  for (const MeasuredPair& m : cfg.measured_pairs()) rows.push_back({m.i, m.j, cfg.cor_for(m)});
  const auto times = cfg.grid.times();
  CorrelationGrid grid = bound_grid(rows, times, bc, threads);
  grid.label = "bound";
  return grid;
}

CorrelationGrid closed_form_grid(const ScenarioConfig& cfg, const ClosedFormParams& params) {
  params.validate();
  CorrelationGrid grid("closed_form", grid_distances(cfg), cfg.grid.times());
  const SimulationSpec& sim = cfg.simulation;
  ClosedFormParams p = params;
  // A product state has no initial correlations: only the dynamical term remains.
  if (sim.kind == SimulationKind::kMagnonProd) p.c1 = 0.0;
  const auto pairs = cfg.measured_pairs();
  for (std::size_t di = 0; di < pairs.size(); ++di) {
    const int delta = pairs[di].delta;
    for (std::size_t ti = 0; ti < grid.num_times(); ++ti) {
      const double t = grid.times[ti];
      double value;
      if (sim.kind == SimulationKind::kMagnonBell) {
        const int k = sim.bell_adjacent ? delta / 2 - 1 : std::abs(sim.q - cfg.center);
        value = bound_block_closed(t, delta / 2, k, p);
      } else {
        value = bound_power_closed(t, delta, p);
      }
      grid.at(di, ti) = value;
    }
  }
  return grid;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  ScenarioResult result;
  const bool want_bound = options.mode != RunMode::kSimulate;
  const bool want_exact = options.mode != RunMode::kBound;

  // Fail before any long computation.
  if (want_exact) check_boundary_guard(cfg);

  const BoundConstants bc =
      BoundConstants::compute(cfg.decay, cfg.lattice, cfg.interaction());

  nlohmann::ordered_json summary;
  summary["scenario"] = cfg.name;
  summary["mode"] = options.mode == RunMode::kBound      ? "bound"
                    : options.mode == RunMode::kSimulate ? "simulate"
                                                         : "verify";
  summary["simulation"] = {{"kind", to_string(cfg.simulation.kind)},
                           {"observable", to_string(cfg.simulation.observable)}};
  summary["norm_F"] = bc.norm_F_val;
  summary["const_C"] = bc.const_C;
  summary["norm_phi"] = bc.norm_phi;
  summary["decay"] = decay_json(cfg.decay);
  summary["num_sites"] = cfg.lattice.num_sites();

  if (want_bound) {
    result.grids.push_back(scenario_bound_grid(cfg, bc, options.threads));
    if (cfg.closed_form && cfg.outputs.emit_closed_form) {
      ClosedFormParams params = cfg.closed_form->params;
      if (!cfg.closed_form->velocity_given) {
        params.v = ClosedFormParams::default_velocity(bc, params.a);
      }
      result.grids.push_back(closed_form_grid(cfg, params));
      summary["closed_form"] = {{"a", params.a},   {"v", params.v},   {"c_tilde", params.c_tilde},
                                {"c1", params.c1}, {"c2", params.c2}, {"chi", params.chi}};
    }
  }
  if (want_exact) result.grids.push_back(exact_grid(cfg, options.threads));

  if (want_bound && want_exact) {
    result.report = verify_dominance(*result.find("bound"), *result.find("exact"), cfg.name);
    summary["dominance"] = {{"num_violations", result.report->num_violations},
                            {"worst_margin", result.report->worst_margin}};
  }
  summary["grids"] = nlohmann::ordered_json::array();
  for (const CorrelationGrid& g : result.grids) summary["grids"].push_back(grid_summary(g));
  result.summary = std::move(summary);
  return result;
}

void emit_outputs(const ScenarioResult& result, const ScenarioConfig& cfg,
                  const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  for (const CorrelationGrid& g : result.grids) {
    const bool wanted = (g.label == "bound" && cfg.outputs.emit_bound) ||
                        (g.label == "exact" && cfg.outputs.emit_exact) ||
                        (g.label == "closed_form" && cfg.outputs.emit_closed_form);
    if (!wanted) continue;
    std::ostringstream csv;
    write_csv(g, csv);
    write_text(directory / (cfg.name + "__" + g.label + ".csv"), csv.str());
  }
  if (result.report) write_text(directory / "report.json", result.report->to_json().dump(2) + "\n");
  write_text(directory / "summary.json", result.summary.dump(2) + "\n");
}

void write_arrivals_csv(const std::map<int, std::optional<double>>& arrivals,
                        const std::filesystem::path& path) {
  std::string text = "delta,t_arrival\n";
  for (const auto& [delta, t] : arrivals) {
    text += std::to_string(delta) + ',' + (t ? format_double(*t) : std::string()) + '\n';
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  write_text(path, text);
}

std::vector<ConstantsRow> constants_table(const ScenarioConfig& cfg) {
  const int n_max = cfg.lattice.num_sites();
  std::vector<int> sizes;
  for (int n : {2, 3, 5, 10, 20, 50, 100, 200, 400, 800}) {
    if (n < n_max) sizes.push_back(n);
  }
  sizes.push_back(n_max);
  const PairInteractionSpec interaction = cfg.interaction();
  std::vector<ConstantsRow> rows;
  for (int n : sizes) {
    const LatticeSpec lattice(n);
    rows.push_back({n, norm_F(cfg.decay, lattice), constant_C(cfg.decay, lattice),
                    norm_phi(interaction, cfg.decay, lattice)});
  }
  return rows;
}

}  // namespace lrcorr
