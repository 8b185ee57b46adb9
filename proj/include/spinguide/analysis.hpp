#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spinguide/guides.hpp"
#include "spinguide/propagator.hpp"

namespace spinguide {

/// Which reference the transport overlap of the final state is taken against.
/// Eq4Literal: the initial wave function, band-limited-shifted by the guide's
/// net displacement (the convention behind the reported figures).
/// PhaseMatched: the instantaneous moving bound mode at t_f, including its
/// velocity phase. The two agree exactly when the initial and final guide
/// velocities are equal.
enum class FidelityConvention { Eq4Literal, PhaseMatched };

struct MetricsReport {
  double fidelity = 0.0;                 // reported (Eq4Literal) value
  double fidelity_phase_matched = 0.0;
  double reflection = 0.0;
  double transmission = 0.0;
  double total_fidelity = 0.0;           // R + T (X junction runs)
  double left_fraction = 0.0;
  double right_fraction = 0.0;
  double absorbed = 0.0;
  double final_norm2 = 1.0;
  std::vector<std::string> warnings;
};

struct SweepTable {
  std::string parameter;
  std::vector<double> values;
  std::vector<MetricsReport> reports;
  std::vector<std::string> row_status;  // "ok" or an error message
};

double transport_fidelity(const WaveFunction& psi0, const WaveFunction& psiF,
                          const GuideTrajectory& traj, const Scenario& scn,
                          FidelityConvention convention,
                          std::vector<std::string>* warnings = nullptr);

struct ReflectionTransmission {
  double reflection = 0.0;
  double transmission = 0.0;
};

/// X-junction port overlaps of the final state. Requires exactly two XBranch
/// guides of opposite direction with the excitation initialized in one of
/// them; transmission is the port of the initialized guide (it keeps moving
/// and exits on its own side), reflection the crossing guide's port.
ReflectionTransmission reflection_transmission(const EvolutionRecord& record,
                                               const Scenario& scn,
                                               FidelityConvention convention);

/// (P_left, P_right): probability at x_j < 0 and x_j >= 0; sums to norm^2.
std::pair<double, double> left_right_fraction(const WaveFunction& psi);

/// Closed-form two-guide oscillation frequency
///   Omega(d) = csch^2(d) [cosh 3d + 4d sinh d - (8d^2+1) cosh d]
///              / [cosh 2d - 2d^2 - 1],
/// evaluated through a cancellation-free series below d = 0.5 and an
/// exponential form above; Omega(0) = 16/15 by the analytic limit.
double coupled_mode_frequency_closed_form(double d);

struct TwoStateResult {
  Eigen::Matrix2d hamiltonian;
  double gap = 0.0;
  double overlap = 0.0;  // <psi_left|psi_right>
};

/// Effective two-state Hamiltonian of two k = 0 sech modes at -+d/2 over the
/// summed two-well potential, with the right mode Gram-Schmidt-orthonormalized
/// against the left; projected by quadrature on an internal fine grid.
TwoStateResult effective_two_state_hamiltonian(double d, const PhysicalConstants& constants);

/// Dominant angular frequency of the left-guide occupation series, from the
/// spacing of its interior extrema with parabolic refinement. Needs at least
/// two full oscillation periods in the record.
double numerical_oscillation_frequency(const EvolutionRecord& record, const Scenario& scn);

/// Builds initial state, evolves, and assembles the full metrics report.
struct RunResult {
  EvolutionRecord record;
  MetricsReport metrics;
};
RunResult run_scenario(const Scenario& scn);

/// Fig. 2(a): transport fidelity vs corner angle, one table per r value.
std::vector<SweepTable> sweep_corner(const std::vector<double>& r_values,
                                     const std::vector<double>& theta_values, double t_f,
                                     const Scenario& base, int jobs);

/// Fig. 3(a): R, T, F_tot vs X-junction angle at fixed x_l, t_f = x_l/tan(theta/2).
SweepTable sweep_xjunction(const std::vector<double>& theta_values, double x_l,
                           const Scenario& base, int jobs);

struct CouplingRow {
  double d = 0.0;
  double omega_closed = 0.0;
  double omega_two_state = 0.0;
  double omega_pde = 0.0;
  std::string status = "ok";
};

/// Closed form vs two-state gap vs full-PDE extraction per separation d.
std::vector<CouplingRow> sweep_coupling(const std::vector<double>& d_values,
                                        const Scenario& base, int jobs);

struct InterferenceRow {
  double alpha = 0.0;
  double p_left = 0.0;
  double p_right = 0.0;
  double absorbed = 0.0;
  std::string status = "ok";
};

/// Fig. 4(c): exit fractions vs superposition phase on an X-junction scenario.
std::vector<InterferenceRow> sweep_interference(const std::vector<double>& alphas,
                                                const Scenario& base, int jobs);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` worker threads (<=0 means
/// hardware concurrency). Exceptions are caught per index and returned as
/// messages; empty string means success.
std::vector<std::string> parallel_run(std::size_t n, int jobs,
                                      const std::function<void(std::size_t)>& fn);

}  // namespace spinguide
