#include "spinguide/guides.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spinguide {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time_window(double t, double t_f, const char* what) {
  const double slack = 1e-9 * (1.0 + std::abs(t_f));
  if (t < -slack || t > t_f + slack) {
    std::ostringstream msg;
    msg << what << ": t = " << t << " outside trajectory domain [0, " << t_f << "]";
    throw std::invalid_argument(msg.str());
  }
}

double splitter_f(const ParallelSplitterBranch& p, double t) {
  const double u = p.m * t + (p.d - p.x_l) / 4.0;
  return std::sqrt(p.r + u * u) - p.m * t + (p.d + p.x_l) / 4.0;
}

double splitter_f_prime(const ParallelSplitterBranch& p, double t) {
  const double u = p.m * t + (p.d - p.x_l) / 4.0;
  const double g = p.r + u * u;
  if (g == 0.0) return 0.0;  // right-sided at the r=0 kink: m*sign(0+)-m = 0
  return p.m * u / std::sqrt(g) - p.m;
}

struct CenterVisitor {
  double t;
  double operator()(const Stationary& s) const { return s.x0; }
  double operator()(const Linear& l) const { return l.x0 + l.v * t; }
  double operator()(const Corner& c) const {
    check_time_window(t, c.t_f, "Corner center");
    const double s = std::tanh(c.theta);
    const double tau = t - c.t_f / 2.0;
    return std::sqrt(c.r + s * s * tau * tau) + s * tau;
  }
  double operator()(const ParallelSplitterBranch& p) const {
    check_time_window(t, p.t_f, "ParallelSplitterBranch center");
    const double f = (t < p.t_f / 2.0) ? splitter_f(p, t) : splitter_f(p, p.t_f - t);
    return p.side == SplitterSide::Right ? f : -f;
  }
  double operator()(const XBranch& x) const {
    const double g = x.x_l / 2.0 - std::tan(x.theta / 2.0) * t;
    return x.direction == XDirection::RightToLeft ? g : -g;
  }
};

struct VelocityVisitor {
  double t;
  double operator()(const Stationary&) const { return 0.0; }
  double operator()(const Linear& l) const { return l.v; }
  double operator()(const Corner& c) const {
    check_time_window(t, c.t_f, "Corner velocity");
    const double s = std::tanh(c.theta);
    const double tau = t - c.t_f / 2.0;
    const double g = c.r + s * s * tau * tau;
    if (g == 0.0) return 2.0 * s;  // right-sided derivative at the kink
    return s * s * tau / std::sqrt(g) + s;
  }
  double operator()(const ParallelSplitterBranch& p) const {
    check_time_window(t, p.t_f, "ParallelSplitterBranch velocity");
    const double f = (t < p.t_f / 2.0) ? splitter_f_prime(p, t) : -splitter_f_prime(p, p.t_f - t);
    return p.side == SplitterSide::Right ? f : -f;
  }
  double operator()(const XBranch& x) const {
    const double g = -std::tan(x.theta / 2.0);
    return x.direction == XDirection::RightToLeft ? g : -g;
  }
};

}  // namespace

void PhysicalConstants::validate() const {
  if (!(J > 0.0) || !(B0 > 0.0) || !(w > 0.0))
    throw std::invalid_argument("PhysicalConstants: J, B0 and w must be positive");
}

bool PhysicalConstants::sech_mode_exact() const {
  return std::abs(2.0 * B0 * w * w / J - 2.0) < 1e-12;
}

double center(const GuideTrajectory& traj, double t) { return std::visit(CenterVisitor{t}, traj); }

double velocity(const GuideTrajectory& traj, double t) {
  return std::visit(VelocityVisitor{t}, traj);
}

void validate_trajectory(const GuideTrajectory& traj) {
  if (const auto* c = std::get_if<Corner>(&traj)) {
    if (!(c->r >= 0.0)) throw std::invalid_argument("Corner: r must be >= 0");
    if (!(c->theta > 0.0 && c->theta < kPi / 2.0))
      throw std::invalid_argument("Corner: theta must lie in (0, pi/2)");
    if (!(c->t_f > 0.0)) throw std::invalid_argument("Corner: t_f must be positive");
  } else if (const auto* p = std::get_if<ParallelSplitterBranch>(&traj)) {
    if (!(p->r >= 0.0)) throw std::invalid_argument("ParallelSplitterBranch: r must be >= 0");
    if (!(p->d > 0.0)) throw std::invalid_argument("ParallelSplitterBranch: d must be positive");
    if (!(p->t_f > 0.0)) throw std::invalid_argument("ParallelSplitterBranch: t_f must be positive");
  } else if (const auto* x = std::get_if<XBranch>(&traj)) {
    if (!(x->x_l > 0.0)) throw std::invalid_argument("XBranch: x_l must be positive");
    if (!(x->theta > 0.0)) throw std::invalid_argument("XBranch: theta must be positive");
    if (!(std::tan(x->theta / 2.0) > 0.0))
      throw std::invalid_argument("XBranch: tan(theta/2) must be positive (theta mod 2pi in (0, pi))");
  }
}

void SolverSettings::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverSettings: dt must be positive");
  if (!(absorber_width >= 0.0))
    throw std::invalid_argument("SolverSettings: absorber_width must be >= 0");
  if (!(absorber_strength >= 0.0))
    throw std::invalid_argument("SolverSettings: absorber_strength must be >= 0");
  if (snapshot_stride < 1)
    throw std::invalid_argument("SolverSettings: snapshot_stride must be >= 1");
}

void validate_scenario(const Scenario& scn) {
  scn.constants.validate();
  scn.solver.validate();
  if (scn.guides.empty()) throw std::invalid_argument("Scenario: guides must be non-empty");
  if (!(scn.t_f >= scn.t0)) throw std::invalid_argument("Scenario: t_f must be >= t0");
  if (!(scn.solver.absorber_width < scn.grid.length() / 4.0))
    throw std::invalid_argument("Scenario: absorber_width must be < (x_max - x_min)/4");
  const double margin = 5.0 * scn.constants.w;
  for (std::size_t g = 0; g < scn.guides.size(); ++g) {
    validate_trajectory(scn.guides[g]);
    const double c = center(scn.guides[g], scn.t0);
    if (c < scn.grid.x_min + margin || c > scn.grid.x_max - margin) {
      std::ostringstream msg;
      msg << "Scenario: guide " << g << " starts at x0 = " << c
          << ", closer than 5w to the grid boundary";
      throw std::invalid_argument(msg.str());
    }
  }
  const auto& ini = scn.initial_state;
  const int n = static_cast<int>(scn.guides.size());
  if (ini.kind == InitialStateKind::GroundMode) {
    if (ini.guide < 0 || ini.guide >= n)
      throw std::invalid_argument("Scenario: initial_state guide index out of range");
  } else {
    if (ini.guide_a < 0 || ini.guide_a >= n || ini.guide_b < 0 || ini.guide_b >= n ||
        ini.guide_a == ini.guide_b)
      throw std::invalid_argument("Scenario: superposition guide indices invalid");
  }
}

void potential_into(const Scenario& scn, double t, std::vector<double>& out) {
  const Grid1D& grid = scn.grid;
  out.assign(grid.n_points, 0.0);
  const double B0 = scn.constants.B0;
  const double inv_w = 1.0 / scn.constants.w;
  for (const GuideTrajectory& traj : scn.guides) {
    const double c = center(traj, t);
    for (int j = 0; j < grid.n_points; ++j) {
      const double z = std::abs((grid.position(j) - c) * inv_w);
      const double u = std::exp(-2.0 * z);
      const double sech = 2.0 * std::exp(-z) / (1.0 + u);
      out[j] -= B0 * sech * sech;
    }
  }
}

std::vector<double> potential(const Scenario& scn, double t) {
  std::vector<double> v;
  potential_into(scn, t, v);
  return v;
}

Complex ground_mode_at(const GuideTrajectory& traj, double t,
                       const PhysicalConstants& constants, double x) {
  const double c = center(traj, t);
  const double k = velocity(traj, t);
  const double z = (x - c) / constants.w;
  const double norm = 1.0 / std::sqrt(2.0 * constants.w);
  return std::polar(norm / std::cosh(z), k * x);
}

WaveFunction ground_mode(const GuideTrajectory& traj, double t,
                         const PhysicalConstants& constants, const Grid1D& grid) {
  constants.validate();
  const double c = center(traj, t);
  const double margin = 5.0 * constants.w;
  if (c < grid.x_min + margin || c > grid.x_max - margin) {
    std::ostringstream msg;
    msg << "ground_mode: guide center " << c << " within 5w of the grid boundary";
    throw std::invalid_argument(msg.str());
  }
  const double k = velocity(traj, t);
  const double norm = 1.0 / std::sqrt(2.0 * constants.w);
  WaveFunction psi(grid);
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.position(j);
    psi.amp[j] = std::polar(norm / std::cosh((x - c) / constants.w), k * x);
  }
  return psi;
}

WaveFunction initial_superposition(const GuideTrajectory& traj_a,
                                   const GuideTrajectory& traj_b, double t, double alpha,
                                   const PhysicalConstants& constants, const Grid1D& grid,
                                   std::vector<std::string>* warnings) {
  const WaveFunction a = ground_mode(traj_a, t, constants, grid);
  const WaveFunction b = ground_mode(traj_b, t, constants, grid);
  const double sep = std::abs(center(traj_a, t) - center(traj_b, t));
  if (sep < 4.0 * constants.w && warnings) {
    std::ostringstream msg;
    msg << "initial_superposition: guide separation " << sep
        << " below 4w; the 1/sqrt(2) normalization is only approximate (state renormalized)";
    warnings->push_back(msg.str());
  }
  WaveFunction psi(grid);
  const Complex phase = std::polar(1.0, alpha);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < grid.n_points; ++j)
    psi.amp[j] = (a.amp[j] + phase * b.amp[j]) * inv_sqrt2;
  normalize(psi);
  return psi;
}

WaveFunction initial_state(const Scenario& scn, std::vector<std::string>* warnings) {
  if (!scn.constants.sech_mode_exact() && warnings)
    warnings->push_back(
        "constants: sech mode is not the exact bound state for these (J, B0, w)");
  if (scn.initial_state.kind == InitialStateKind::GroundMode)
    return ground_mode(scn.guides[scn.initial_state.guide], scn.t0, scn.constants, scn.grid);
  return initial_superposition(scn.guides[scn.initial_state.guide_a],
                               scn.guides[scn.initial_state.guide_b], scn.t0,
                               scn.initial_state.alpha, scn.constants, scn.grid, warnings);
}

}  // namespace spinguide
