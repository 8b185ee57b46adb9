#pragma once

#include <string>
#include <vector>

#include "spinguide/analysis.hpp"
#include "spinguide/chain.hpp"
#include "spinguide/config.hpp"
#include "spinguide/propagator.hpp"

namespace spinguide {

/// 9-significant-digit decimal rendering used by every data file.
std::string format_number(double v);

/// FNV-1a 64-bit, hex-encoded; used as the config checksum.
std::string fnv1a64_hex(const std::string& bytes);

/// Density map: one row per snapshot, one column per grid point.
void write_density(const std::string& path, const EvolutionRecord& record);

/// Grid, snapshot times, tool version, config checksum and the fully resolved
/// configuration (re-runnable as a config document).
void write_metadata(const std::string& path, const RunConfig& cfg,
                    const std::vector<double>& snapshot_times,
                    const std::string& config_checksum);

/// Structured key-value metrics, always including the norm ledger.
void write_metrics(const std::string& path, const MetricsReport& metrics);

/// Corner sweep: theta column plus one fidelity column per table.
void write_corner_sweep(const std::string& path, const std::vector<SweepTable>& tables,
                        const std::vector<double>& r_values);

void write_xjunction_sweep(const std::string& path, const SweepTable& table);

void write_coupling_sweep(const std::string& path, const std::vector<CouplingRow>& rows);

void write_interference(const std::string& path, const std::vector<InterferenceRow>& rows);

struct ChainCompareRow {
  double spacing = 0.0;
  double overlap = 0.0;
  double boundary_occupation = 0.0;
  bool boundary_warning = false;
  double chain_norm_drift = 0.0;
  double wall_ms_continuum = 0.0;
  double wall_ms_chain = 0.0;
  std::string status = "ok";
};

void write_chain_compare(const std::string& path, const std::vector<ChainCompareRow>& rows);

}  // namespace spinguide
