#include "spinguide/output.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "spinguide/version.hpp"

namespace spinguide {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

}  // namespace

std::string format_number(double v) {
  require_finite(v, "format_number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_density(const std::string& path, const EvolutionRecord& record) {
  std::ofstream out = open_out(path);
  for (const Snapshot& snap : record.snapshots) {
    for (std::size_t j = 0; j < snap.density.size(); ++j) {
      if (j) out << ' ';
      out << format_number(snap.density[j]);
    }
    out << '\n';
  }
}

void write_metadata(const std::string& path, const RunConfig& cfg,
                    const std::vector<double>& snapshot_times,
                    const std::string& config_checksum) {
  nlohmann::json meta;
  meta["tool"] = "spinguide";
  meta["version"] = kVersion;
  meta["config_checksum_fnv1a64"] = config_checksum;
  meta["grid"] = {{"x_min", cfg.scenario.grid.x_min},
                  {"x_max", cfg.scenario.grid.x_max},
                  {"n_points", cfg.scenario.grid.n_points},
                  {"dx", cfg.scenario.grid.dx}};
  meta["snapshot_count"] = snapshot_times.size();
  meta["snapshot_times"] = snapshot_times;
  meta["resolved_config"] = nlohmann::json::parse(resolved_config_json(cfg));
  std::ofstream out = open_out(path);
  out << meta.dump(2) << '\n';
}

void write_metrics(const std::string& path, const MetricsReport& m) {
  std::ofstream out = open_out(path);
  out << "fidelity = " << format_number(m.fidelity) << '\n';
  out << "fidelity_phase_matched = " << format_number(m.fidelity_phase_matched) << '\n';
  out << "reflection = " << format_number(m.reflection) << '\n';
  out << "transmission = " << format_number(m.transmission) << '\n';
  out << "total_fidelity = " << format_number(m.total_fidelity) << '\n';
  out << "left_fraction = " << format_number(m.left_fraction) << '\n';
  out << "right_fraction = " << format_number(m.right_fraction) << '\n';
  out << "final_norm = " << format_number(m.final_norm2) << '\n';
  out << "absorbed = " << format_number(m.absorbed) << '\n';
  out << "norm_ledger = " << format_number(m.final_norm2 + m.absorbed) << '\n';
  for (const std::string& w : m.warnings) out << "warning = " << w << '\n';
}

void write_corner_sweep(const std::string& path, const std::vector<SweepTable>& tables,
                        const std::vector<double>& r_values) {
  std::ofstream out = open_out(path);
  out << "theta";
  for (double r : r_values)
    out << "\tfidelity_r" << format_number(r) << "\tstatus_r" << format_number(r);
  out << '\n';
  if (tables.empty()) return;
  const std::size_t rows = tables.front().values.size();
  for (std::size_t i = 0; i < rows; ++i) {
    out << format_number(tables.front().values[i]);
    for (const SweepTable& tab : tables) {
      const bool ok = tab.row_status[i] == "ok";
      out << '\t' << (ok ? format_number(tab.reports[i].fidelity) : "nan") << '\t'
          << (ok ? "ok" : "error");
    }
    out << '\n';
  }
}

void write_xjunction_sweep(const std::string& path, const SweepTable& table) {
  std::ofstream out = open_out(path);
  out << "theta\treflection\ttransmission\ttotal_fidelity\tabsorbed\tstatus\n";
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const MetricsReport& m = table.reports[i];
    const bool ok = table.row_status[i] == "ok";
    out << format_number(table.values[i]) << '\t';
    if (ok) {
      out << format_number(m.reflection) << '\t' << format_number(m.transmission) << '\t'
          << format_number(m.total_fidelity) << '\t' << format_number(m.absorbed) << "\tok\n";
    } else {
      out << "nan\tnan\tnan\tnan\terror\n";
    }
  }
}

void write_coupling_sweep(const std::string& path, const std::vector<CouplingRow>& rows) {
  std::ofstream out = open_out(path);
  out << "d\tomega_closed_form\tomega_two_state\tomega_pde\tstatus\n";
  for (const CouplingRow& row : rows) {
    const bool ok = row.status == "ok";
    out << format_number(row.d) << '\t' << format_number(row.omega_closed) << '\t'
        << format_number(row.omega_two_state) << '\t'
        << (ok ? format_number(row.omega_pde) : "nan") << '\t' << (ok ? "ok" : "error") << '\n';
  }
}

void write_interference(const std::string& path, const std::vector<InterferenceRow>& rows) {
  std::ofstream out = open_out(path);
  out << "alpha\tp_left\tp_right\tabsorbed\tstatus\n";
  for (const InterferenceRow& row : rows) {
    const bool ok = row.status == "ok";
    out << format_number(row.alpha) << '\t';
    if (ok) {
      out << format_number(row.p_left) << '\t' << format_number(row.p_right) << '\t'
          << format_number(row.absorbed) << '\t' << "ok\n";
    } else {
      out << "nan\tnan\tnan\terror\n";
    }
  }
}

void write_chain_compare(const std::string& path, const std::vector<ChainCompareRow>& rows) {
  std::ofstream out = open_out(path);
  out << "spacing\toverlap\tboundary_occupation\tboundary_warning\tchain_norm_drift"
         "\twall_ms_continuum\twall_ms_chain\tstatus\n";
  for (const ChainCompareRow& row : rows) {
    const bool ok = row.status == "ok";
    out << format_number(row.spacing) << '\t';
    if (ok) {
      out << format_number(row.overlap) << '\t' << format_number(row.boundary_occupation) << '\t'
          << (row.boundary_warning ? "yes" : "no") << '\t'
          << format_number(row.chain_norm_drift) << '\t'
          << format_number(row.wall_ms_continuum) << '\t' << format_number(row.wall_ms_chain)
          << "\tok\n";
    } else {
      out << "nan\tnan\tno\tnan\tnan\tnan\terror\n";
    }
  }
}

}  // namespace spinguide
