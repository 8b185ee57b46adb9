#pragma once

#include <memory>
#include <vector>

#include "spinguide/fft.hpp"
#include "spinguide/guides.hpp"
#include "spinguide/grid.hpp"

namespace spinguide {

struct Snapshot {
  double t = 0.0;
  std::vector<double> density;  // |psi_j|^2
  double norm2 = 0.0;           // total probability remaining
  double absorbed = 0.0;        // cumulative probability removed by the absorber
};

struct EvolutionRecord {
  std::vector<Snapshot> snapshots;
  WaveFunction final_state;
  double final_norm2 = 1.0;
  double final_absorbed = 0.0;

  std::vector<double> times() const;
  /// Probability at x < 0 per snapshot (drives the oscillation analysis).
  std::vector<double> left_fraction_series(const Grid1D& grid) const;
};

/// Per-step multiplicative damping mask exp(-strength*dt*s(x)); s is a
/// cos^2 ramp rising from 0 at the layer's inner edge to 1 at the boundary,
/// identically 0 in the interior.
std::vector<double> make_absorber(const Grid1D& grid, const SolverSettings& settings);

/// Strang split-operator stepper for i d(psi)/dt = [B(x,t) - (J/2) d^2/dx^2] psi:
/// half potential step (B sampled at t + dt/2), spectral kinetic step, half
/// potential step, then the absorber mask. Owns FFT plans and scratch buffers;
/// one instance per evolution, not shared across threads.
class Propagator {
 public:
  explicit Propagator(const Scenario& scn);

  /// Advances psi in place by one step of size dt starting at time t.
  /// dt may differ from the scenario default (final partial step, reversed
  /// stepping in tests). Returns the probability removed by the absorber.
  double advance(WaveFunction& psi, double t, double dt);

  /// Full evolution over [t0, t_f] with a final partial step landing exactly
  /// on t_f. Snapshots are recorded at t0, every snapshot_stride-th step and
  /// at t_f. psi0 must live on the scenario grid.
  EvolutionRecord evolve(const WaveFunction& psi0);

  const std::vector<double>& absorber_mask() const { return mask_; }

 private:
  void ensure_kinetic_table(double dt);

  const Scenario scn_;
  Fft fft_;
  std::vector<double> mask_;
  std::vector<int> absorbing_indices_;
  std::vector<double> pot_;
  std::vector<Complex> half_phase_;
  std::vector<Complex> kinetic_;
  double kinetic_dt_ = 0.0;
  std::vector<Complex> hat_;
  double phase_budget_ = 0.0;
};

/// One-shot convenience wrapper around Propagator::advance.
WaveFunction step(const WaveFunction& psi, const Scenario& scn, double t, double dt);

/// Convenience wrapper: validates the scenario, builds psi0 from the recipe
/// and evolves it. Warnings from state construction are appended if given.
EvolutionRecord evolve(const WaveFunction& psi0, const Scenario& scn);

}  // namespace spinguide
