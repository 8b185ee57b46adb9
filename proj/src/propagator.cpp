#include "spinguide/propagator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spinguide {

namespace {

// exp(i*phi) for small |phi| without sincos; Taylor through phi^8 / phi^9
// keeps the error below 1e-16 for |phi| <= 0.3.
inline Complex cis_small(double phi) {
  const double p2 = phi * phi;
  const double c = 1.0 + p2 * (-0.5 + p2 * (1.0 / 24.0 + p2 * (-1.0 / 720.0 + p2 / 40320.0)));
  const double s =
      phi * (1.0 + p2 * (-1.0 / 6.0 + p2 * (1.0 / 120.0 + p2 * (-1.0 / 5040.0 + p2 / 362880.0))));
  return Complex{c, s};
}

}  // namespace

std::vector<double> EvolutionRecord::times() const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const Snapshot& s : snapshots) out.push_back(s.t);
  return out;
}

std::vector<double> EvolutionRecord::left_fraction_series(const Grid1D& grid) const {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const Snapshot& s : snapshots) {
    double p = 0.0;
    for (int j = 0; j < grid.n_points; ++j)
      if (grid.position(j) < 0.0) p += s.density[j];
    out.push_back(p * grid.dx);
  }
  return out;
}

std::vector<double> make_absorber(const Grid1D& grid, const SolverSettings& settings) {
  std::vector<double> mask(grid.n_points, 1.0);
  const double w = settings.absorber_width;
  if (w <= 0.0 || settings.absorber_strength <= 0.0) return mask;
  const double a = grid.x_min + w;
  const double b = grid.x_max - w;
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.position(j);
    double s = 0.0;
    if (x < a) {
      const double c = std::cos(std::numbers::pi * (x - grid.x_min) / (2.0 * w));
      s = c * c;
    } else if (x > b) {
      const double c = std::cos(std::numbers::pi * (grid.x_max - x) / (2.0 * w));
      s = c * c;
    }
    mask[j] = std::exp(-settings.absorber_strength * settings.dt * s);
  }
  return mask;
}

Propagator::Propagator(const Scenario& scn)
    : scn_(scn),
      fft_(scn.grid.n_points),
      mask_(make_absorber(scn.grid, scn.solver)),
      pot_(scn.grid.n_points),
      half_phase_(scn.grid.n_points),
      hat_(scn.grid.n_points) {
  for (int j = 0; j < scn_.grid.n_points; ++j)
    if (mask_[j] < 1.0) absorbing_indices_.push_back(j);
  // Upper bound on |V| dt/2 decides whether the small-angle phase path is safe.
  phase_budget_ = scn_.constants.B0 * static_cast<double>(scn_.guides.size()) *
                  scn_.solver.dt * 0.5;
  ensure_kinetic_table(scn_.solver.dt);
}

void Propagator::ensure_kinetic_table(double dt) {
  if (!kinetic_.empty() && dt == kinetic_dt_) return;
  const int n = scn_.grid.n_points;
  kinetic_.resize(n);
  const double half_j = 0.5 * scn_.constants.J;
  const double inv_n = 1.0 / n;  // folds the inverse-FFT normalization in
  for (int m = 0; m < n; ++m) {
    const double k = scn_.grid.wavenumber(m);
    kinetic_[m] = std::polar(inv_n, -half_j * k * k * dt);
  }
  kinetic_dt_ = dt;
}

double Propagator::advance(WaveFunction& psi, double t, double dt) {
  if (!(psi.grid == scn_.grid)) throw std::invalid_argument("Propagator: state on wrong grid");
  const int n = scn_.grid.n_points;
  ensure_kinetic_table(dt);
  potential_into(scn_, t + dt / 2.0, pot_);
  const double half_dt = dt / 2.0;
  const bool small = phase_budget_ * std::abs(dt) / scn_.solver.dt < 0.3;
  for (int j = 0; j < n; ++j) {
    const double phi = -pot_[j] * half_dt;
    half_phase_[j] = small ? cis_small(phi) : std::polar(1.0, phi);
  }
  for (int j = 0; j < n; ++j) psi.amp[j] *= half_phase_[j];
  fft_.forward(psi.amp.data(), hat_.data());
  for (int m = 0; m < n; ++m) hat_[m] *= kinetic_[m];
  fft_.inverse(hat_.data(), psi.amp.data());
  for (int j = 0; j < n; ++j) psi.amp[j] *= half_phase_[j];

  double removed = 0.0;
  for (int j : absorbing_indices_) {
    const Complex& u = psi.amp[j];
    const double p = u.real() * u.real() + u.imag() * u.imag();
    removed += (1.0 - mask_[j] * mask_[j]) * p;
    psi.amp[j] *= mask_[j];
  }
  return removed * scn_.grid.dx;
}

EvolutionRecord Propagator::evolve(const WaveFunction& psi0) {
  const double t0 = scn_.t0;
  const double t_f = scn_.t_f;
  const double dt = scn_.solver.dt;
  const int stride = scn_.solver.snapshot_stride;

  WaveFunction psi = psi0;
  EvolutionRecord rec;
  double absorbed = 0.0;

  auto record = [&](double t) {
    Snapshot snap;
    snap.t = t;
    snap.density.resize(psi.amp.size());
    double n2 = 0.0;
    for (std::size_t j = 0; j < psi.amp.size(); ++j) {
      const Complex& u = psi.amp[j];
      const double p = u.real() * u.real() + u.imag() * u.imag();
      snap.density[j] = p;
      n2 += p;
    }
    snap.norm2 = n2 * psi.grid.dx;
    snap.absorbed = absorbed;
    rec.snapshots.push_back(std::move(snap));
    return rec.snapshots.back().norm2;
  };

  record(t0);
  const double span = t_f - t0;
  if (span <= 1e-15 * (1.0 + std::abs(t_f))) {
    rec.final_state = std::move(psi);
    rec.final_norm2 = rec.snapshots.back().norm2;
    rec.final_absorbed = 0.0;
    return rec;
  }
  const long n_full = static_cast<long>(std::floor(span / dt + 1e-9));
  long k = 0;
  for (; k < n_full; ++k) {
    const double t = t0 + k * dt;
    absorbed += advance(psi, t, dt);
    const double t_next = t0 + (k + 1) * dt;
    const bool last = (k + 1 == n_full) && (t_f - t_next <= 1e-9 * (1.0 + std::abs(t_f)));
    if ((k + 1) % stride == 0 && !last) {
      const double n2 = record(t_next);
      if (!std::isfinite(n2)) {
        std::ostringstream msg;
        msg << "Propagator: non-finite state at t = " << t_next;
        throw std::runtime_error(msg.str());
      }
    }
  }
  const double t_last = t0 + n_full * dt;
  if (t_f - t_last > 1e-9 * (1.0 + std::abs(t_f)))
    absorbed += advance(psi, t_last, t_f - t_last);
  const double n2 = record(t_f);
  if (!std::isfinite(n2)) {
    std::ostringstream msg;
    msg << "Propagator: non-finite state at t = " << t_f;
    throw std::runtime_error(msg.str());
  }
  rec.final_state = std::move(psi);
  rec.final_norm2 = rec.snapshots.back().norm2;
  rec.final_absorbed = absorbed;
  return rec;
}

WaveFunction step(const WaveFunction& psi, const Scenario& scn, double t, double dt) {
  Propagator prop(scn);
  WaveFunction out = psi;
  prop.advance(out, t, dt);
  const double n2 = norm_squared(out);
  if (!std::isfinite(n2)) {
    std::ostringstream msg;
    msg << "step: non-finite state at t = " << t + dt;
    throw std::runtime_error(msg.str());
  }
  return out;
}

EvolutionRecord evolve(const WaveFunction& psi0, const Scenario& scn) {
  validate_scenario(scn);
  Propagator prop(scn);
  return prop.evolve(psi0);
}

}  // namespace spinguide
