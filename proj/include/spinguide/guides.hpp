#pragma once

#include <string>
#include <variant>
#include <vector>

#include "spinguide/grid.hpp"

namespace spinguide {

/// Exchange strength, well depth and well width in J = hbar = 1 units.
/// The sech mode constructor is the exact bound state only for the default
/// set (2*B0*w^2/J = 2); other values are accepted with a recorded warning.
struct PhysicalConstants {
  double J = 1.0;
  double B0 = 1.0;
  double w = 1.0;

  void validate() const;
  bool sech_mode_exact() const;
};

struct Stationary {
  double x0 = 0.0;
};

struct Linear {
  double x0 = 0.0;
  double v = 0.0;
};

/// Hyperbolic corner: center(t) = sqrt(r + s^2 tau^2) + s tau, tau = t - t_f/2,
/// with slope s = tanh(theta). The guide is asymptotically at rest, turns near
/// t_f/2 (sharply for r = 0) and leaves at speed 2s.
struct Corner {
  double r = 0.0;
  double theta = 0.1;
  double t_f = 10.0;
};

enum class SplitterSide { Left, Right };

/// One branch of the parallel spin-splitter: the right branch follows
/// f(t) = sqrt(r + (4 m t + d - x_l)^2 / 16) - m t + (d + x_l)/4 for
/// t < t_f/2 and f(t_f - t) afterwards; the left branch is its mirror.
struct ParallelSplitterBranch {
  double r = 0.0;
  double d = 1.0;
  double m = 0.1;
  double x_l = 0.0;
  double t_f = 10.0;
  SplitterSide side = SplitterSide::Right;
};

enum class XDirection { LeftToRight, RightToLeft };

/// Straight line of an X junction: center(t) = -+(x_l/2 - tan(theta/2) t).
struct XBranch {
  double x_l = 10.0;
  double theta = 0.5;  // radians
  XDirection direction = XDirection::LeftToRight;
};

using GuideTrajectory =
    std::variant<Stationary, Linear, Corner, ParallelSplitterBranch, XBranch>;

double center(const GuideTrajectory& traj, double t);
/// Analytic d(center)/dt; at non-differentiable instants (the r = 0 corner
/// kink, the splitter seam) the right-sided derivative is returned.
double velocity(const GuideTrajectory& traj, double t);

void validate_trajectory(const GuideTrajectory& traj);

enum class InitialStateKind { GroundMode, Superposition };

struct InitialStateSpec {
  InitialStateKind kind = InitialStateKind::GroundMode;
  int guide = 0;        // GroundMode
  int guide_a = 0;      // Superposition
  int guide_b = 1;
  double alpha = 0.0;   // relative phase of guide_b's mode
};

struct SolverSettings {
  double dt = 0.005;
  double absorber_width = 5.0;
  double absorber_strength = 1.0;
  int snapshot_stride = 1;

  void validate() const;
};

/// One full experiment: guides, constants, grid, time window, solver settings
/// and the initial-state recipe.
struct Scenario {
  PhysicalConstants constants;
  std::vector<GuideTrajectory> guides;
  Grid1D grid;
  double t0 = 0.0;
  double t_f = 10.0;
  SolverSettings solver;
  InitialStateSpec initial_state;
};

/// Checks all scenario invariants (non-empty guides, every center at t0 at
/// least 5w inside the interior, sane time window and absorber geometry).
void validate_scenario(const Scenario& scn);

/// Summed Poschl-Teller field B(x_j, t) = sum_g -B0 sech^2[(x_j - c_g(t))/w].
void potential_into(const Scenario& scn, double t, std::vector<double>& out);
std::vector<double> potential(const Scenario& scn, double t);

/// Bound-mode amplitude at a single point,
/// e^{i k x} sech[(x - c)/w] / sqrt(2 w) with k = velocity(traj, t).
Complex ground_mode_at(const GuideTrajectory& traj, double t,
                       const PhysicalConstants& constants, double x);

/// Bound mode of one guide sampled on the grid. Errors if the guide center is
/// within 5w of the domain boundary (tail truncation).
WaveFunction ground_mode(const GuideTrajectory& traj, double t,
                         const PhysicalConstants& constants, const Grid1D& grid);

/// (mode_a + e^{i alpha} mode_b)/sqrt(2), renormalized exactly. Overlapping
/// guides (|dx0| < 4w) record a warning instead of failing.
WaveFunction initial_superposition(const GuideTrajectory& traj_a,
                                   const GuideTrajectory& traj_b, double t, double alpha,
                                   const PhysicalConstants& constants, const Grid1D& grid,
                                   std::vector<std::string>* warnings);

/// Builds the scenario's initial state at t0 from its recipe.
WaveFunction initial_state(const Scenario& scn, std::vector<std::string>* warnings);

}  // namespace spinguide
