#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinguide/analysis.hpp"
#include "spinguide/guides.hpp"

namespace spinguide {

/// Configuration problems: unknown keys, wrong types, missing fields,
/// violated invariants. The message names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CornerSweepSpec {
  std::vector<double> r_values{0.0, 2.0};
  double theta_min = 0.01;
  double theta_max = 0.7;
  int theta_count = 50;
  double t_f = 10.0;
};

struct XJunctionSweepSpec {
  double log10_theta_min = -1.0;
  double log10_theta_max = 0.45;
  int count = 60;
  double x_l = 10.0;
};

struct CouplingSweepSpec {
  std::vector<double> d_values{1.0, 1.5, 2.0, 2.5, 3.0};
};

struct InterferenceSpec {
  std::vector<double> alphas;  // empty: uniform grid over [-pi, pi]
  int count = 33;
};

struct ChainCompareSpec {
  std::vector<double> spacings{0.4, 0.2, 0.1};
};

struct OutputOptions {
  std::string directory = "out";
  FidelityConvention fidelity_convention = FidelityConvention::Eq4Literal;
};

struct RunConfig {
  Scenario scenario;
  OutputOptions outputs;
  std::optional<CornerSweepSpec> corner_sweep;
  std::optional<XJunctionSweepSpec> xjunction_sweep;
  std::optional<CouplingSweepSpec> coupling_sweep;
  std::optional<InterferenceSpec> interference;
  std::optional<ChainCompareSpec> chain_compare;
};

/// Parses and validates a config document. Unknown keys are rejected with the
/// full field path. snapshot_stride <= 0 (or absent) resolves to roughly 400
/// snapshots per run.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// The fully resolved configuration (every default materialized) as a JSON
/// document that parse_config accepts again.
std::string resolved_config_json(const RunConfig& cfg);

std::string read_file(const std::string& path);

}  // namespace spinguide
