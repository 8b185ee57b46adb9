#include "spinguide/chain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spinguide {

namespace {

double field_at(const Scenario& scn, double x, double t) {
  double b = 0.0;
  const double B0 = scn.constants.B0;
  const double inv_w = 1.0 / scn.constants.w;
  for (const GuideTrajectory& traj : scn.guides) {
    const double z = (x - center(traj, t)) * inv_w;
    const double sech = 1.0 / std::cosh(z);
    b -= B0 * sech * sech;
  }
  return b;
}

/// Thomas solve of the tridiagonal system with constant off-diagonal.
void thomas_solve(const std::vector<Complex>& diag, Complex off, const std::vector<Complex>& b,
                  std::vector<Complex>& x, std::vector<Complex>& scratch) {
  const int n = static_cast<int>(diag.size());
  x.resize(n);
  scratch.resize(n);
  Complex beta = diag[0];
  x[0] = b[0] / beta;
  for (int j = 1; j < n; ++j) {
    scratch[j] = off / beta;
    beta = diag[j] - off * scratch[j];
    x[j] = (b[j] - off * x[j - 1]) / beta;
  }
  for (int j = n - 2; j >= 0; --j) x[j] -= scratch[j + 1] * x[j + 1];
}

/// One Crank-Nicolson step (I + i L) psi' = (I - i L) psi, L = (dt/2) H, for a
/// symmetric tridiagonal H with constant hopping and optional periodic wrap
/// (Sherman-Morrison rank-1 correction).
class CrankNicolson {
 public:
  CrankNicolson(int n, bool periodic) : n_(n), periodic_(periodic) {}

  void step(const Eigen::VectorXd& lambda_diag, double lambda_off, std::vector<Complex>& psi) {
    const Complex ioff{0.0, lambda_off};
    adiag_.resize(n_);
    rhs_.resize(n_);
    for (int j = 0; j < n_; ++j) adiag_[j] = Complex{1.0, lambda_diag[j]};
    for (int j = 0; j < n_; ++j) {
      Complex r = std::conj(adiag_[j]) * psi[j];
      if (j > 0) r -= ioff * psi[j - 1];
      if (j + 1 < n_) r -= ioff * psi[j + 1];
      if (periodic_) {
        if (j == 0) r -= ioff * psi[n_ - 1];
        if (j == n_ - 1) r -= ioff * psi[0];
      }
      rhs_[j] = r;
    }
    if (!periodic_) {
      thomas_solve(adiag_, ioff, rhs_, psi, scratch_);
      return;
    }
    // A = T + u v^T with u = (gamma, 0, .., c)^T, v = (1, 0, .., c/gamma)^T,
    // c the corner element; T is A with modified first/last diagonals.
    const Complex c = ioff;
    const Complex gamma = -adiag_[0];
    tdiag_ = adiag_;
    tdiag_[0] -= gamma;
    tdiag_[n_ - 1] -= c * c / gamma;
    thomas_solve(tdiag_, ioff, rhs_, y_, scratch_);
    u_.assign(n_, Complex{0.0, 0.0});
    u_[0] = gamma;
    u_[n_ - 1] = c;
    thomas_solve(tdiag_, ioff, u_, q_, scratch_);
    const Complex vy = y_[0] + (c / gamma) * y_[n_ - 1];
    const Complex vq = q_[0] + (c / gamma) * q_[n_ - 1];
    const Complex f = vy / (Complex{1.0, 0.0} + vq);
    for (int j = 0; j < n_; ++j) psi[j] = y_[j] - f * q_[j];
  }

 private:
  int n_;
  bool periodic_;
  std::vector<Complex> adiag_, tdiag_, rhs_, y_, q_, u_, scratch_;
};

}  // namespace

std::vector<double> ChainConfig::sites() const {
  std::vector<double> xs(n_spins);
  for (int n = 0; n < n_spins; ++n) xs[n] = site(n);
  return xs;
}

double ChainState::norm2() const {
  double s = 0.0;
  for (const Complex& u : c) s += u.real() * u.real() + u.imag() * u.imag();
  return s;
}

ChainConfig make_chain_config(const Scenario& scn, double spacing, ChainBoundary boundary) {
  if (!(spacing > 0.0)) throw std::invalid_argument("make_chain_config: spacing must be positive");
  ChainConfig cfg;
  cfg.spacing = spacing;
  cfg.n_spins = static_cast<int>(std::round(scn.grid.length() / spacing));
  if (cfg.n_spins < 3) throw std::invalid_argument("make_chain_config: fewer than 3 spins");
  cfg.J = scn.constants.J / (spacing * spacing);
  cfg.x0 = scn.grid.x_min;
  cfg.boundary = boundary;
  return cfg;
}

Eigen::MatrixXd SingleExcitationHamiltonian::dense() const {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) h(j, j) = diag[j];
  for (int j = 0; j + 1 < n; ++j) h(j, j + 1) = h(j + 1, j) = hop;
  if (periodic && n > 2) h(0, n - 1) = h(n - 1, 0) = hop;
  return h;
}

SingleExcitationHamiltonian single_excitation_hamiltonian(const ChainConfig& cfg,
                                                          const Scenario& scn, double t) {
  SingleExcitationHamiltonian h;
  h.hop = -cfg.J / 2.0;
  h.periodic = cfg.boundary == ChainBoundary::Periodic;
  h.diag.resize(cfg.n_spins);
  for (int n = 0; n < cfg.n_spins; ++n) {
    const bool edge = !h.periodic && (n == 0 || n == cfg.n_spins - 1);
    const double bonds = edge ? cfg.J / 2.0 : cfg.J;
    h.diag[n] = bonds + field_at(scn, cfg.site(n), t);
  }
  return h;
}

ChainState initial_chain_state(const ChainConfig& cfg, const Scenario& scn) {
  ChainState st;
  st.c.resize(cfg.n_spins);
  const auto& ini = scn.initial_state;
  if (ini.kind == InitialStateKind::GroundMode) {
    const GuideTrajectory& traj = scn.guides[ini.guide];
    for (int n = 0; n < cfg.n_spins; ++n)
      st.c[n] = ground_mode_at(traj, scn.t0, scn.constants, cfg.site(n));
  } else {
    const Complex phase = std::polar(1.0, ini.alpha);
    for (int n = 0; n < cfg.n_spins; ++n) {
      const double x = cfg.site(n);
      st.c[n] = ground_mode_at(scn.guides[ini.guide_a], scn.t0, scn.constants, x) +
                phase * ground_mode_at(scn.guides[ini.guide_b], scn.t0, scn.constants, x);
    }
  }
  const double n2 = st.norm2();
  if (!(n2 > 0.0)) throw std::domain_error("initial_chain_state: zero state");
  const double s = 1.0 / std::sqrt(n2);
  for (Complex& u : st.c) u *= s;
  return st;
}

ChainEvolutionResult evolve_chain(const ChainState& state, const ChainConfig& cfg,
                                  const Scenario& scn) {
  if (state.size() != cfg.n_spins)
    throw std::invalid_argument("evolve_chain: state length differs from n_spins");
  const double span = scn.t_f - scn.t0;
  const double dt_max = std::min(scn.solver.dt, 0.1 * cfg.spacing * cfg.spacing);
  const long n_steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt_max - 1e-9)) : 0;
  const double dt = n_steps > 0 ? span / n_steps : 0.0;

  ChainEvolutionResult res;
  res.state = state;
  std::vector<Complex>& psi = res.state.c;
  CrankNicolson cn(cfg.n_spins, cfg.boundary == ChainBoundary::Periodic);
  Eigen::VectorXd lambda(cfg.n_spins);

  for (long k = 0; k < n_steps; ++k) {
    const double t_mid = scn.t0 + (k + 0.5) * dt;
    const SingleExcitationHamiltonian h = single_excitation_hamiltonian(cfg, scn, t_mid);
    // uniform bulk diagonal dropped: a global phase only
    for (int j = 0; j < cfg.n_spins; ++j) lambda[j] = (h.diag[j] - cfg.J) * dt / 2.0;
    cn.step(lambda, h.hop * dt / 2.0, psi);

    double edge = 0.0;
    for (int j : {0, 1, cfg.n_spins - 2, cfg.n_spins - 1})
      edge += std::norm(psi[j]);
    res.max_boundary_occupation = std::max(res.max_boundary_occupation, edge);
    if (!std::isfinite(edge)) {
      std::ostringstream msg;
      msg << "evolve_chain: non-finite state at t = " << scn.t0 + (k + 1) * dt;
      throw std::runtime_error(msg.str());
    }
  }
  res.norm_drift = std::abs(res.state.norm2() - 1.0);
  return res;
}

double chain_continuum_overlap(const ChainState& chain, const ChainConfig& cfg,
                               const WaveFunction& psi) {
  if (chain.size() != cfg.n_spins)
    throw std::invalid_argument("chain_continuum_overlap: state length differs from n_spins");
  const double lo = cfg.site(0), hi = cfg.site(cfg.n_spins - 1);
  if (lo < psi.grid.x_min - 1e-9 || hi > psi.grid.x_max + 1e-9)
    throw std::invalid_argument("chain_continuum_overlap: chain extends beyond the grid domain");
  const std::vector<Complex> vals = band_limited_values(psi, cfg.sites());
  const double sqrt_a = std::sqrt(cfg.spacing);
  Complex acc{0.0, 0.0};
  for (int n = 0; n < cfg.n_spins; ++n) acc += std::conj(chain.c[n]) * vals[n] * sqrt_a;
  return std::norm(acc);
}

}  // namespace spinguide
