// lrcorr: Lieb-Robinson correlation bounds versus exact XX-chain dynamics.
//
//   lrcorr verify configs/fig1_prod.toml --out out/fig1 --threads 4
//
// Exit codes: 0 success, 1 validation error, 2 dominance violation, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lrcorr/errors.hpp"
#include "lrcorr/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitViolation = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  double threshold = 0.1;
};

std::filesystem::path output_dir(const Options& opt, const lrcorr::ScenarioConfig& cfg) {
  return opt.out.empty() ? std::filesystem::path(cfg.outputs.directory)
                         : std::filesystem::path(opt.out);
}

int run_grids(const Options& opt, lrcorr::RunMode mode) {
  const lrcorr::ScenarioConfig cfg = lrcorr::load_scenario(opt.config);
  const lrcorr::ScenarioResult result = lrcorr::run_scenario(cfg, {mode, opt.threads});
  const auto dir = output_dir(opt, cfg);
  lrcorr::emit_outputs(result, cfg, dir);
  for (const auto& g : result.grids) {
    std::cout << cfg.name << ": " << g.label << " grid " << g.num_distances() << " x "
              << g.num_times() << "\n";
  }
  if (result.report) {
    const auto& r = *result.report;
    std::cout << cfg.name << ": " << r.num_cells << " cells, " << r.num_violations
              << " violations, worst margin " << lrcorr::format_double(r.worst_margin) << "\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  if (result.report && result.report->num_violations > 0) return kExitViolation;
  return kExitOk;
}

int run_constants(const Options& opt) {
  const lrcorr::ScenarioConfig cfg = lrcorr::load_scenario(opt.config);
  std::cout << "num_sites,norm_F,const_C,norm_phi\n";
  for (const auto& row : lrcorr::constants_table(cfg)) {
    std::cout << row.num_sites << ',' << lrcorr::format_double(row.norm_F) << ','
              << lrcorr::format_double(row.const_C) << ',' << lrcorr::format_double(row.norm_phi)
              << '\n';
  }
  return kExitOk;
}

int run_arrivals(const Options& opt) {
  const lrcorr::ScenarioConfig cfg = lrcorr::load_scenario(opt.config);
  const lrcorr::CorrelationGrid exact = lrcorr::exact_grid(cfg, opt.threads);
  const auto arrivals = lrcorr::arrival_times(exact, opt.threshold);
  const auto path = output_dir(opt, cfg) / (cfg.name + "__arrivals.csv");
  lrcorr::write_arrivals_csv(arrivals, path);
  std::cout << "delta,t_arrival\n";
  for (const auto& [delta, t] : arrivals) {
    std::cout << delta << ',' << (t ? lrcorr::format_double(*t) : std::string("none")) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lieb-Robinson correlation bounds versus exact XX-chain dynamics"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool writes) {
    sub->add_option("config", opt.config, "scenario config (TOML)")->required();
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 1024));
    if (writes) sub->add_option("--out", opt.out, "output directory (default: outputs.directory)");
  };

  auto* bound = app.add_subcommand("bound", "bound grids only");
  auto* simulate = app.add_subcommand("simulate", "exact grids only");
  auto* verify = app.add_subcommand("verify", "bound and exact grids plus dominance report");
  auto* constants = app.add_subcommand("constants", "print the lattice constants versus N");
  auto* arrivals = app.add_subcommand("arrivals", "arrival times of the exact correlations");
  for (auto* sub : {bound, simulate, verify, arrivals}) add_common(sub, true);
  add_common(constants, false);
  arrivals->add_option("--threshold", opt.threshold, "arrival threshold on |correlation|")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*bound) return run_grids(opt, lrcorr::RunMode::kBound);
    if (*simulate) return run_grids(opt, lrcorr::RunMode::kSimulate);
    if (*verify) return run_grids(opt, lrcorr::RunMode::kVerify);
    if (*constants) return run_constants(opt);
    if (*arrivals) return run_arrivals(opt);
  } catch (const lrcorr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const lrcorr::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
