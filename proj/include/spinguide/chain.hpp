#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinguide/guides.hpp"
#include "spinguide/grid.hpp"

namespace spinguide {

enum class ChainBoundary { Open, Periodic };

/// Discrete Heisenberg chain sampled across a continuum scenario's domain.
/// Site n sits at x_min + n*a. The chain exchange is J_continuum / a^2 so the
/// single-excitation sector reduces to the continuum equation as a -> 0.
struct ChainConfig {
  int n_spins = 0;
  double J = 1.0;
  double spacing = 0.2;
  double x0 = 0.0;  // position of site 0
  ChainBoundary boundary = ChainBoundary::Open;

  double site(int n) const { return x0 + spacing * n; }
  std::vector<double> sites() const;
};

/// Single-magnon amplitudes, l2-normalized (closed system, no absorber).
struct ChainState {
  std::vector<Complex> c;

  int size() const { return static_cast<int>(c.size()); }
  double norm2() const;
};

/// Chain spanning the scenario grid at the given lattice spacing.
ChainConfig make_chain_config(const Scenario& scn, double spacing,
                              ChainBoundary boundary = ChainBoundary::Open);

/// Restriction of the Heisenberg Hamiltonian with field to the one-flipped-spin
/// basis, relative to the all-up reference: hopping -J/2, diagonal J per bulk
/// site (J/2 at open ends) plus the relative field term B(x_n, t).
struct SingleExcitationHamiltonian {
  Eigen::VectorXd diag;
  double hop = 0.0;
  bool periodic = false;

  Eigen::MatrixXd dense() const;
};

SingleExcitationHamiltonian single_excitation_hamiltonian(const ChainConfig& cfg,
                                                          const Scenario& scn, double t);

/// Initial chain state evaluated from the scenario's initial-state recipe at
/// the chain sites (analytic mode formula, then l2 normalization).
ChainState initial_chain_state(const ChainConfig& cfg, const Scenario& scn);

struct ChainEvolutionResult {
  ChainState state;
  double max_boundary_occupation = 0.0;  // outermost two sites per end, max over steps
  double norm_drift = 0.0;               // max |norm2 - 1| over the run
};

/// Unitary Crank-Nicolson evolution with the Hamiltonian sampled at step
/// midpoints. The step is min(scenario dt, 0.1*a^2) so the stiff hopping term
/// stays phase-accurate. The all-up reference energy and the uniform J bulk
/// diagonal are dropped (global phase).
ChainEvolutionResult evolve_chain(const ChainState& state, const ChainConfig& cfg,
                                  const Scenario& scn);

/// |sum_n conj(c_n) psi(x_n) sqrt(a)|^2 with psi evaluated at the chain sites
/// by band-limited interpolation.
double chain_continuum_overlap(const ChainState& chain, const ChainConfig& cfg,
                               const WaveFunction& psi);

}  // namespace spinguide
