#include "lrcorr/scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "lrcorr/errors.hpp"

namespace lrcorr {

namespace {

// Typed lookups into the parsed document. Every key read is recorded so that
// leftovers can be reported as unknown afterwards.
class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  bool has(const std::string& path) const { return node(path) != nullptr; }

  bool has_section(const std::string& path) const {
    const toml::node* n = node(path);
    if (n && !n->is_table()) fail(path, "expected a table of keys");
    return n != nullptr;
  }

  std::optional<std::string> string(const std::string& path) {
    const toml::node* n = take(path);
    if (!n) return std::nullopt;
    if (!n->is_string()) fail(path, "expected a string");
    return n->as_string()->get();
  }

  std::optional<long long> integer(const std::string& path) {
    const toml::node* n = take(path);
    if (!n) return std::nullopt;
    if (!n->is_integer()) fail(path, "expected an integer");
    return n->as_integer()->get();
  }

  std::optional<int> small_int(const std::string& path) {
    auto v = integer(path);
    if (v && (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max())) {
      fail(path, "integer out of range");
    }
    return v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
  }

  std::optional<double> real(const std::string& path) {
    const toml::node* n = take(path);
    if (!n) return std::nullopt;
    double v;
    if (n->is_floating_point()) {
      v = n->as_floating_point()->get();
    } else if (n->is_integer()) {
      v = static_cast<double>(n->as_integer()->get());
    } else {
      fail(path, "expected a number");
    }
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  std::optional<bool> boolean(const std::string& path) {
    const toml::node* n = take(path);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) fail(path, "expected true or false");
    return n->as_boolean()->get();
  }

  template <typename T>
  static T required(std::optional<T> v, const std::string& path) {
    if (!v) fail(path, "required key missing");
    return *v;
  }

  void reject_unknown() const { walk(root_, ""); }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
  }

 private:
  const toml::node* node(const std::string& path) const {
    return root_.at_path(std::string_view(path)).node();
  }

  const toml::node* take(const std::string& path) {
    const toml::node* n = node(path);
    if (n) used_.insert(path);
    return n;
  }

  void walk(const toml::table& table, const std::string& prefix) const {
    for (const auto& [key, value] : table) {
      const std::string path = prefix.empty() ? std::string(key.str())
                                              : prefix + "." + std::string(key.str());
      if (const toml::table* sub = value.as_table()) {
        walk(*sub, path);
      } else if (!used_.contains(path)) {
        fail(path, "unknown key");
      }
    }
  }

  const toml::table& root_;
  std::set<std::string> used_;
};

DecayFunction read_decay(Reader& r) {
  const std::string kind = Reader::required(r.string("decay.kind"), "decay.kind");
  const double prefactor = r.real("decay.prefactor").value_or(1.0);
  try {
    if (kind == "exp_poly") {
      if (r.has("decay.alpha")) Reader::fail("decay.alpha", "not a field of exp_poly");
      return DecayFunction::exp_poly(Reader::required(r.real("decay.a"), "decay.a"), prefactor);
    }
    if (kind == "power_law") {
      if (r.has("decay.a")) Reader::fail("decay.a", "not a field of power_law");
      return DecayFunction::power_law(Reader::required(r.real("decay.alpha"), "decay.alpha"),
                                      prefactor);
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.starts_with("decay.")) throw;
    Reader::fail("decay", msg);
  }
  Reader::fail("decay.kind", "expected \"exp_poly\" or \"power_law\", got \"" + kind + "\"");
}

GridSpec read_grid(Reader& r) {
  GridSpec g;
  g.t_min = Reader::required(r.real("grid.t_min"), "grid.t_min");
  g.t_max = Reader::required(r.real("grid.t_max"), "grid.t_max");
  g.t_steps = Reader::required(r.small_int("grid.t_steps"), "grid.t_steps");
  g.delta_min = Reader::required(r.small_int("grid.delta_min"), "grid.delta_min");
  g.delta_max = Reader::required(r.small_int("grid.delta_max"), "grid.delta_max");
  g.delta_step = Reader::required(r.small_int("grid.delta_step"), "grid.delta_step");
  if (g.t_min < 0.0) Reader::fail("grid.t_min", "times must be nonnegative");
  if (g.t_max < g.t_min) Reader::fail("grid.t_max", "must be >= grid.t_min");
  if (g.t_steps < 1) Reader::fail("grid.t_steps", "must be >= 1");
  if (g.t_steps == 1 && g.t_max != g.t_min) {
    Reader::fail("grid.t_steps", "a single step needs grid.t_min == grid.t_max");
  }
  if (g.t_steps > 1 && g.t_max == g.t_min) {
    Reader::fail("grid.t_max", "must exceed grid.t_min when grid.t_steps > 1");
  }
  if (g.delta_min < 1) Reader::fail("grid.delta_min", "distances must be >= 1");
  if (g.delta_max < g.delta_min) Reader::fail("grid.delta_max", "must be >= grid.delta_min");
  if (g.delta_step < 1) Reader::fail("grid.delta_step", "must be >= 1");
  return g;
}

CorModel read_cor_model(Reader& r, ScenarioConfig& cfg) {
  const std::string variant =
      Reader::required(r.string("cor_model.variant"), "cor_model.variant");
  try {
    if (variant == "product") return CorModel::product();
    if (variant == "power_law") {
      return CorModel::power_law(Reader::required(r.real("cor_model.c1"), "cor_model.c1"),
                                 Reader::required(r.real("cor_model.chi"), "cor_model.chi"));
    }
    if (variant == "exp_clustered") {
      return CorModel::exp_clustered(Reader::required(r.real("cor_model.c0"), "cor_model.c0"),
                                     Reader::required(r.real("cor_model.xi"), "cor_model.xi"));
    }
    if (variant == "bell_pair") {
      if (cfg.simulation.kind != SimulationKind::kMagnonBell) {
        Reader::fail("cor_model.variant", "bell_pair needs simulation kind magnon_bell");
      }
      const auto p = r.small_int("cor_model.p");
      const auto q = r.small_int("cor_model.q");
      if (p.has_value() != q.has_value()) {
        Reader::fail("cor_model", "give both p and q or neither");
      }
      if (cfg.simulation.bell_adjacent) {
        if (p) Reader::fail("cor_model.p", "adjacent bell pairs follow the measured sites");
        return CorModel::bell_pair(0, 1);  // placeholder, replaced per measured pair
      }
      const int sp = cfg.simulation.p;
      const int sq = cfg.simulation.q;
      if (p && !((*p == sp && *q == sq) || (*p == sq && *q == sp))) {
        Reader::fail("cor_model.p", "bell pair sites must match simulation.p/simulation.q");
      }
      return CorModel::bell_pair(sp, sq);
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.starts_with("cor_model")) throw;
    Reader::fail("cor_model", msg);
  }
  Reader::fail("cor_model.variant",
               "expected product, bell_pair, power_law or exp_clustered, got \"" + variant + "\"");
}

void read_simulation(Reader& r, ScenarioConfig& cfg) {
  SimulationSpec& s = cfg.simulation;
  const int n = cfg.lattice.num_sites();
  const std::string kind = Reader::required(r.string("simulation.kind"), "simulation.kind");
  cfg.center = r.small_int("simulation.center").value_or(n / 2);
  if (!cfg.lattice.contains(cfg.center)) Reader::fail("simulation.center", "outside the lattice");

  auto site = [&](const std::string& path, std::optional<int> v) {
    if (v && !cfg.lattice.contains(*v)) {
      Reader::fail(path, "site " + std::to_string(*v) + " outside lattice of " +
                             std::to_string(n) + " sites");
    }
    return v;
  };
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      const std::string path = std::string("simulation.") + k;
      if (r.has(path)) Reader::fail(path, "not a field of simulation kind " + kind);
    }
  };

  std::string default_observable = "xx";
  if (kind == "magnon_prod") {
    s.kind = SimulationKind::kMagnonProd;
    forbid({"p", "q", "adjacent", "eta"});
    s.flip_site = site("simulation.flip_site", r.small_int("simulation.flip_site")).value_or(cfg.center);
  } else if (kind == "magnon_bell") {
    s.kind = SimulationKind::kMagnonBell;
    forbid({"flip_site", "eta"});
    s.bell_adjacent = r.boolean("simulation.adjacent").value_or(false);
    if (s.bell_adjacent) {
      forbid({"p", "q"});
    } else {
      s.p = Reader::required(site("simulation.p", r.small_int("simulation.p")), "simulation.p");
      s.q = Reader::required(site("simulation.q", r.small_int("simulation.q")), "simulation.q");
      if (s.p == s.q) Reader::fail("simulation.q", "bell pair sites must differ");
    }
  } else if (kind == "gaussian_quench") {
    s.kind = SimulationKind::kGaussianQuench;
    forbid({"flip_site", "p", "q", "adjacent"});
    s.eta = r.real("simulation.eta").value_or(0.5);
    if (n % 2 != 0) Reader::fail("lattice.num_sites", "gaussian_quench needs an even chain");
    default_observable = "zz";
  } else {
    Reader::fail("simulation.kind",
                 "expected magnon_prod, magnon_bell or gaussian_quench, got \"" + kind + "\"");
  }

  const std::string obs = r.string("simulation.observable").value_or(default_observable);
  if (obs == "xx") {
    s.observable = ObservableKind::kXX;
  } else if (obs == "zz") {
    s.observable = ObservableKind::kZZ;
  } else {
    Reader::fail("simulation.observable", "expected \"xx\" or \"zz\", got \"" + obs + "\"");
  }
  if (s.kind == SimulationKind::kGaussianQuench && s.observable != ObservableKind::kZZ) {
    Reader::fail("simulation.observable", "gaussian_quench evaluates zz correlations only");
  }
}

void check_geometry(ScenarioConfig& cfg) {
  const int n = cfg.lattice.num_sites();
  for (const MeasuredPair& m : cfg.measured_pairs()) {
    if (!cfg.lattice.contains(m.i) || !cfg.lattice.contains(m.j)) {
      Reader::fail("grid.delta_max", "measured sites (" + std::to_string(m.i) + ", " +
                                         std::to_string(m.j) + ") for delta " +
                                         std::to_string(m.delta) + " leave the lattice of " +
                                         std::to_string(n) + " sites");
    }
    if (cfg.simulation.kind == SimulationKind::kMagnonBell && cfg.simulation.bell_adjacent &&
        m.delta < 3) {
      Reader::fail("grid.delta_min", "adjacent bell pairs need delta >= 3");
    }
  }
}

void check_cor_consistency(const ScenarioConfig& cfg, const CorModel& cor) {
  const std::string_view model = cor.name();
  std::string_view expected;
  switch (cfg.simulation.kind) {
    case SimulationKind::kMagnonProd: expected = "product"; break;
    case SimulationKind::kMagnonBell: expected = "bell_pair"; break;
    case SimulationKind::kGaussianQuench: expected = "power_law"; break;
  }
  if (model != expected) {
    Reader::fail("cor_model.variant", "simulation kind " + to_string(cfg.simulation.kind) +
                                          " needs cor_model " + std::string(expected));
  }
}

void read_closed_form(Reader& r, ScenarioConfig& cfg) {
  const bool present = r.has_section("closed_form");
  if (!present && !cfg.outputs.emit_closed_form) return;
  ClosedFormSpec spec;
  ClosedFormParams& p = spec.params;
  p.a = cfg.decay.kind() == DecayKind::kExpPoly ? cfg.decay.parameter() : 1.0;
  if (auto v = r.real("closed_form.a")) p.a = *v;
  if (auto v = r.real("closed_form.v")) {
    p.v = *v;
    spec.velocity_given = true;
  }
  if (auto v = r.real("closed_form.c_tilde")) p.c_tilde = *v;
  if (auto v = r.real("closed_form.c1")) p.c1 = *v;
  if (auto v = r.real("closed_form.c2")) p.c2 = *v;
  if (auto v = r.real("closed_form.chi")) p.chi = *v;
  p.validate();

  if (cfg.simulation.kind == SimulationKind::kMagnonBell) {
    if (!cfg.simulation.bell_adjacent && cfg.simulation.p + cfg.simulation.q != 2 * cfg.center) {
      Reader::fail("closed_form", "the block closed form needs the bell pair centered on simulation.center");
    }
    if (cfg.grid.delta_min % 2 != 0 || cfg.grid.delta_step % 2 != 0) {
      Reader::fail("closed_form", "the block closed form needs even distances");
    }
  }
  cfg.closed_form = spec;
}

}  // namespace

std::vector<double> GridSpec::times() const {
  std::vector<double> out(static_cast<std::size_t>(t_steps));
  for (int k = 0; k < t_steps; ++k) {
    out[k] = t_steps == 1 ? t_min : t_min + (t_max - t_min) * k / (t_steps - 1);
  }
  return out;
}

std::vector<int> GridSpec::deltas() const {
  std::vector<int> out;
  for (int d = delta_min; d <= delta_max; d += delta_step) out.push_back(d);
  return out;
}

std::vector<MeasuredPair> ScenarioConfig::measured_pairs() const {
  std::vector<MeasuredPair> out;
  for (int d : grid.deltas()) {
    const int i = center - d / 2;
    out.push_back({d, i, i + d});
  }
  return out;
}

CorModel ScenarioConfig::cor_for(const MeasuredPair& pair) const {
  if (simulation.kind == SimulationKind::kMagnonBell && simulation.bell_adjacent) {
    return CorModel::bell_pair(pair.i + 1, pair.j - 1);
  }
  return *cor_model;
}

PairInteractionSpec ScenarioConfig::interaction() const {
  if (simulation.kind == SimulationKind::kGaussianQuench) {
    return PairInteractionSpec::dimerized_xx_chain(J, simulation.eta);
  }
  return PairInteractionSpec::xx_chain(J);
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, std::string_view(source));
  } catch (const toml::parse_error& e) {
    const auto& pos = e.source().begin;
    throw ValidationError(source + ":" + std::to_string(pos.line) + ":" +
                          std::to_string(pos.column) + ": " + std::string(e.description()));
  }

  Reader r(root);
  ScenarioConfig cfg;
  cfg.name = Reader::required(r.string("name"), "name");
  if (cfg.name.empty() ||
      cfg.name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
          std::string::npos) {
    Reader::fail("name", "use letters, digits, '_' or '-' only");
  }
  const int n = Reader::required(r.small_int("lattice.num_sites"), "lattice.num_sites");
  if (n < 2) Reader::fail("lattice.num_sites", "must be >= 2");
  cfg.lattice = LatticeSpec(n);
  cfg.decay = read_decay(r);
  cfg.J = r.real("interaction.J").value_or(1.0);
  if (cfg.J <= 0.0) Reader::fail("interaction.J", "must be positive");

  cfg.grid = read_grid(r);
  read_simulation(r, cfg);
  const CorModel model = read_cor_model(r, cfg);
  check_cor_consistency(cfg, model);
  if (!cfg.simulation.bell_adjacent) cfg.cor_model = model;
  check_geometry(cfg);

  cfg.outputs.directory = r.string("outputs.directory").value_or("out/" + cfg.name);
  if (cfg.outputs.directory.empty()) Reader::fail("outputs.directory", "must not be empty");
  cfg.outputs.emit_bound = r.boolean("outputs.emit_bound").value_or(true);
  cfg.outputs.emit_exact = r.boolean("outputs.emit_exact").value_or(true);
  cfg.outputs.emit_closed_form = r.boolean("outputs.emit_closed_form").value_or(false);
  read_closed_form(r, cfg);

  r.reject_unknown();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config " + path.string());
  return parse_scenario(text.str(), path.string());
}

std::string to_string(SimulationKind kind) {
  switch (kind) {
    case SimulationKind::kMagnonProd: return "magnon_prod";
    case SimulationKind::kMagnonBell: return "magnon_bell";
    case SimulationKind::kGaussianQuench: return "gaussian_quench";
  }
  return "?";
}

std::string to_string(ObservableKind kind) {
  return kind == ObservableKind::kXX ? "xx" : "zz";
}

}  // namespace lrcorr
