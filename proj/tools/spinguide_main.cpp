#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinguide/analysis.hpp"
#include "spinguide/chain.hpp"
#include "spinguide/config.hpp"
#include "spinguide/output.hpp"
#include "spinguide/version.hpp"

namespace {

using namespace spinguide;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  int snapshot_stride = 0;
  bool literal_eq4 = false;
};

RunConfig load_and_resolve(const CommonOptions& opt, std::string* raw_text) {
  *raw_text = read_file(opt.config_path);
  RunConfig cfg = parse_config(*raw_text);
  if (!opt.out_dir.empty()) cfg.outputs.directory = opt.out_dir;
  if (opt.snapshot_stride >= 1) cfg.scenario.solver.snapshot_stride = opt.snapshot_stride;
  if (opt.literal_eq4) cfg.outputs.fidelity_convention = FidelityConvention::Eq4Literal;
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.outputs.directory);
  fs::create_directories(dir);
  return dir;
}

void emit_metadata(const RunConfig& cfg, const fs::path& dir, const std::string& raw_config,
                   const std::vector<double>& snapshot_times) {
  write_metadata((dir / "metadata.json").string(), cfg, snapshot_times,
                 fnv1a64_hex(raw_config));
}

int cmd_run(const CommonOptions& opt) {
  std::string raw;
  RunConfig cfg = load_and_resolve(opt, &raw);
  const fs::path dir = prepare_out_dir(cfg);
  RunResult res = run_scenario(cfg.scenario);
  if (cfg.outputs.fidelity_convention == FidelityConvention::PhaseMatched)
    std::swap(res.metrics.fidelity, res.metrics.fidelity_phase_matched);
  write_density((dir / "density.tsv").string(), res.record);
  write_metrics((dir / "metrics.txt").string(), res.metrics);
  emit_metadata(cfg, dir, raw, res.record.times());
  std::cout << "run: fidelity = " << format_number(res.metrics.fidelity)
            << ", final norm = " << format_number(res.metrics.final_norm2)
            << ", absorbed = " << format_number(res.metrics.absorbed) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& kind, const CommonOptions& opt) {
  std::string raw;
  RunConfig cfg = load_and_resolve(opt, &raw);
  const fs::path dir = prepare_out_dir(cfg);
  bool partial = false;

  if (kind == "corner") {
    const CornerSweepSpec spec = cfg.corner_sweep.value_or(CornerSweepSpec{});
    std::vector<double> thetas(spec.theta_count);
    for (int i = 0; i < spec.theta_count; ++i)
      thetas[i] = spec.theta_min +
                  (spec.theta_max - spec.theta_min) * i / (spec.theta_count - 1);
    const auto tables = sweep_corner(spec.r_values, thetas, spec.t_f, cfg.scenario, opt.jobs);
    write_corner_sweep((dir / "sweep_corner.tsv").string(), tables, spec.r_values);
    for (const SweepTable& tab : tables)
      for (const std::string& st : tab.row_status) partial |= (st != "ok");
  } else if (kind == "xjunction") {
    const XJunctionSweepSpec spec = cfg.xjunction_sweep.value_or(XJunctionSweepSpec{});
    std::vector<double> thetas(spec.count);
    for (int i = 0; i < spec.count; ++i) {
      const double e = spec.log10_theta_min +
                       (spec.log10_theta_max - spec.log10_theta_min) * i / (spec.count - 1);
      thetas[i] = std::pow(10.0, e);
    }
    const SweepTable tab = sweep_xjunction(thetas, spec.x_l, cfg.scenario, opt.jobs);
    write_xjunction_sweep((dir / "sweep_xjunction.tsv").string(), tab);
    for (const std::string& st : tab.row_status) partial |= (st != "ok");
  } else if (kind == "coupling") {
    const CouplingSweepSpec spec = cfg.coupling_sweep.value_or(CouplingSweepSpec{});
    const auto rows = sweep_coupling(spec.d_values, cfg.scenario, opt.jobs);
    write_coupling_sweep((dir / "sweep_coupling.tsv").string(), rows);
    for (const CouplingRow& row : rows) partial |= (row.status != "ok");
  } else {
    std::cerr << "unknown sweep kind: " << kind << "\n";
    return kExitConfig;
  }
  emit_metadata(cfg, dir, raw, {});
  if (partial) {
    std::cerr << "sweep finished with failed rows (see the status column)\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_interfere(const CommonOptions& opt) {
  std::string raw;
  RunConfig cfg = load_and_resolve(opt, &raw);
  const fs::path dir = prepare_out_dir(cfg);
  const InterferenceSpec spec = cfg.interference.value_or(InterferenceSpec{});
  std::vector<double> alphas = spec.alphas;
  if (alphas.empty()) {
    alphas.resize(spec.count);
    for (int i = 0; i < spec.count; ++i)
      alphas[i] = -std::numbers::pi + 2.0 * std::numbers::pi * i / (spec.count - 1);
  }
  const auto rows = sweep_interference(alphas, cfg.scenario, opt.jobs);
  write_interference((dir / "interference.tsv").string(), rows);
  emit_metadata(cfg, dir, raw, {});
  for (const InterferenceRow& row : rows)
    if (row.status != "ok") {
      std::cerr << "interference sweep finished with failed rows\n";
      return kExitPartial;
    }
  return kExitOk;
}

int cmd_chain_compare(const CommonOptions& opt) {
  std::string raw;
  RunConfig cfg = load_and_resolve(opt, &raw);
  const fs::path dir = prepare_out_dir(cfg);
  const ChainCompareSpec spec = cfg.chain_compare.value_or(ChainCompareSpec{});
  std::vector<ChainCompareRow> rows(spec.spacings.size());
  bool partial = false;

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  RunResult continuum = run_scenario(cfg.scenario);
  const double wall_continuum =
      std::chrono::duration<double, std::milli>(clock::now() - t0).count();

  auto errors = parallel_run(spec.spacings.size(), opt.jobs, [&](std::size_t i) {
    ChainCompareRow& row = rows[i];
    row.spacing = spec.spacings[i];
    const ChainConfig ccfg = make_chain_config(cfg.scenario, row.spacing);
    const ChainState c0 = initial_chain_state(ccfg, cfg.scenario);
    const auto t1 = clock::now();
    const ChainEvolutionResult ev = evolve_chain(c0, ccfg, cfg.scenario);
    row.wall_ms_chain = std::chrono::duration<double, std::milli>(clock::now() - t1).count();
    row.wall_ms_continuum = wall_continuum;
    row.overlap = chain_continuum_overlap(ev.state, ccfg, continuum.record.final_state);
    row.boundary_occupation = ev.max_boundary_occupation;
    row.boundary_warning = ev.max_boundary_occupation > 1e-6;
    row.chain_norm_drift = ev.norm_drift;
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    rows[i].spacing = spec.spacings[i];
    if (!errors[i].empty()) {
      rows[i].status = errors[i];
      partial = true;
    }
  }
  write_chain_compare((dir / "chain_compare.tsv").string(), rows);
  emit_metadata(cfg, dir, raw, {});
  return partial ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-guide transport simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions opt;
  std::string sweep_kind;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", opt.out_dir, "output directory (overrides config)");
    cmd->add_option("--jobs", opt.jobs, "worker threads (default: hardware concurrency)");
    cmd->add_option("--snapshot-stride", opt.snapshot_stride,
                    "record every n-th step (overrides config)");
    cmd->add_flag("--literal-eq4", opt.literal_eq4,
                  "report the plain shifted-overlap fidelity (the default convention)");
  };

  CLI::App* run = app.add_subcommand("run", "evolve one scenario and write its outputs");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep (corner|xjunction|coupling)");
  sweep->add_option("kind", sweep_kind, "sweep kind")
      ->required()
      ->check(CLI::IsMember({"corner", "xjunction", "coupling"}));
  add_common(sweep);
  CLI::App* interfere =
      app.add_subcommand("interfere", "superposition-phase sweep on an X junction");
  add_common(interfere);
  CLI::App* chain = app.add_subcommand("chain-compare",
                                       "continuum solver vs discrete-chain oracle");
  add_common(chain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(sweep_kind, opt);
    if (interfere->parsed()) return cmd_interfere(opt);
    if (chain->parsed()) return cmd_chain_compare(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
