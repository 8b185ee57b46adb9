#include "spinguide/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spinguide {

namespace {

constexpr double kPi = std::numbers::pi;

double absorber_mass(const WaveFunction& psi, const SolverSettings& solver) {
  const Grid1D& g = psi.grid;
  const double a = g.x_min + solver.absorber_width;
  const double b = g.x_max - solver.absorber_width;
  double m = 0.0;
  for (int j = 0; j < g.n_points; ++j) {
    const double x = g.position(j);
    if (x < a || x > b) m += std::norm(psi.amp[j]);
  }
  return m * g.dx;
}

struct XJunctionView {
  int initialized = 0;  // index of the guide carrying the initial excitation
  int crossing = 1;
};

XJunctionView require_xjunction(const Scenario& scn) {
  if (scn.guides.size() != 2 || !std::holds_alternative<XBranch>(scn.guides[0]) ||
      !std::holds_alternative<XBranch>(scn.guides[1]))
    throw std::invalid_argument("reflection_transmission: scenario is not an X junction");
  const auto& a = std::get<XBranch>(scn.guides[0]);
  const auto& b = std::get<XBranch>(scn.guides[1]);
  if (a.direction == b.direction)
    throw std::invalid_argument("reflection_transmission: X branches must cross");
  if (scn.initial_state.kind != InitialStateKind::GroundMode)
    throw std::invalid_argument(
        "reflection_transmission: excitation must be initialized in a single guide");
  XJunctionView v;
  v.initialized = scn.initial_state.guide;
  v.crossing = 1 - v.initialized;
  return v;
}

// ---- closed-form Omega(d) -------------------------------------------------

// cosh(3d) + 4 d sinh(d) - (8d^2+1) cosh(d): even series with positive terms
// c_n = 9^n/(2n)! + 4/(2n-1)! - 1/(2n)! - 8/(2n-2)!, n >= 3.
double omega_numerator_series(double d) {
  const double d2 = d * d;
  double pow9 = 729.0;      // 9^3
  double fact2n = 720.0;    // 6!
  double fact2nm1 = 120.0;  // 5!
  double fact2nm2 = 24.0;   // 4!
  double dpow = d2 * d2 * d2;
  double sum = 0.0;
  for (int n = 3; n <= 14; ++n) {
    const double c = pow9 / fact2n + 4.0 / fact2nm1 - 1.0 / fact2n - 8.0 / fact2nm2;
    sum += c * dpow;
    dpow *= d2;
    pow9 *= 9.0;
    fact2nm2 = fact2n;
    fact2nm1 = fact2n * (2 * n + 1);
    fact2n = fact2nm1 * (2 * n + 2);
  }
  return sum;
}

// cosh(2d) - 2d^2 - 1 = sum_{n>=2} 4^n/(2n)! d^{2n}
double omega_denominator_series(double d) {
  const double d2 = d * d;
  double pow4 = 16.0;     // 4^2
  double fact2n = 24.0;   // 4!
  double dpow = d2 * d2;
  double sum = 0.0;
  for (int n = 2; n <= 14; ++n) {
    sum += pow4 / fact2n * dpow;
    dpow *= d2;
    pow4 *= 4.0;
    fact2n *= (2 * n + 1) * (2 * n + 2);
  }
  return sum;
}

}  // namespace

double transport_fidelity(const WaveFunction& psi0, const WaveFunction& psiF,
                          const GuideTrajectory& traj, const Scenario& scn,
                          FidelityConvention convention, std::vector<std::string>* warnings) {
  if (convention == FidelityConvention::PhaseMatched) {
    const WaveFunction ref = ground_mode(traj, scn.t_f, scn.constants, scn.grid);
    return std::norm(inner_product(ref, psiF));
  }
  const double displacement = center(traj, scn.t_f) - center(traj, scn.t0);
  const WaveFunction shifted = band_limited_shift(psiF, displacement);
  if (warnings) {
    const double m = absorber_mass(shifted, scn.solver);
    if (m > 1e-6) {
      std::ostringstream msg;
      msg << "transport_fidelity: shifted state has probability " << m
          << " inside the absorber layer";
      warnings->push_back(msg.str());
    }
  }
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < psi0.amp.size(); ++j)
    acc += psi0.amp[j] * std::conj(shifted.amp[j]);
  return std::norm(acc * psi0.grid.dx);
}

ReflectionTransmission reflection_transmission(const EvolutionRecord& record,
                                               const Scenario& scn,
                                               FidelityConvention convention) {
  const XJunctionView v = require_xjunction(scn);
  const GuideTrajectory& ig = scn.guides[v.initialized];
  const GuideTrajectory& og = scn.guides[v.crossing];
  const WaveFunction& psiF = record.final_state;
  ReflectionTransmission rt;
  if (convention == FidelityConvention::PhaseMatched) {
    rt.transmission =
        std::norm(inner_product(ground_mode(ig, scn.t_f, scn.constants, scn.grid), psiF));
    rt.reflection =
        std::norm(inner_product(ground_mode(og, scn.t_f, scn.constants, scn.grid), psiF));
    return rt;
  }
  // Eq.-4 reading: the reference is the initial state shifted by the channel's
  // net displacement. Transmitted channel: the initialized guide's own
  // displacement. Reflected channel: ends where the crossing guide ends, so
  // its displacement is og(t_f) - ig(t0) (zero for the symmetric X junction).
  const WaveFunction psi0 = ground_mode(ig, scn.t0, scn.constants, scn.grid);
  const double c0 = center(ig, scn.t0);
  auto literal_overlap = [&](double displacement) {
    const WaveFunction shifted = band_limited_shift(psiF, displacement);
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < psi0.amp.size(); ++j)
      acc += psi0.amp[j] * std::conj(shifted.amp[j]);
    return std::norm(acc * psi0.grid.dx);
  };
  rt.transmission = literal_overlap(center(ig, scn.t_f) - c0);
  rt.reflection = literal_overlap(center(og, scn.t_f) - c0);
  return rt;
}

std::pair<double, double> left_right_fraction(const WaveFunction& psi) {
  double l = 0.0, r = 0.0;
  for (int j = 0; j < psi.grid.n_points; ++j) {
    const double p = std::norm(psi.amp[j]);
    (psi.grid.position(j) < 0.0 ? l : r) += p;
  }
  return {l * psi.grid.dx, r * psi.grid.dx};
}

double coupled_mode_frequency_closed_form(double d) {
  if (d < 0.0)
    throw std::invalid_argument("coupled_mode_frequency_closed_form: d must be >= 0");
  if (d == 0.0) return 16.0 / 15.0;
  const double sh = std::sinh(d);
  if (d < 0.5)
    return omega_numerator_series(d) / (sh * sh * omega_denominator_series(d));
  // exponential form in u = e^{-d}; overflow-free and stable for all d
  const double u = std::exp(-d);
  const double u2 = u * u;
  const double u4 = u2 * u2;
  const double u6 = u4 * u2;
  const double num =
      1.0 + u6 + 4.0 * d * u2 * (1.0 - u2) - (8.0 * d * d + 1.0) * u2 * (1.0 + u2);
  const double den = 1.0 + u4 - (4.0 * d * d + 2.0) * u2;
  const double onem = 1.0 - u2;
  return 4.0 * u * num / (onem * onem * den);
}

TwoStateResult effective_two_state_hamiltonian(double d, const PhysicalConstants& constants) {
  constants.validate();
  if (!(d > 0.0)) throw std::invalid_argument("effective_two_state_hamiltonian: d must be > 0");
  const double w = constants.w;
  const double half_l = d / 2.0 + 30.0 * w;
  const int n = 1 << 15;
  const double dx = 2.0 * half_l / n;
  const double mode_norm = 1.0 / std::sqrt(2.0 * w);
  const double kin = constants.J / (2.0 * w * w);

  std::vector<double> pl(n), pr(n), hpl(n), hpr(n);
  for (int j = 0; j < n; ++j) {
    const double x = -half_l + dx * j;
    const double zl = (x + d / 2.0) / w;
    const double zr = (x - d / 2.0) / w;
    const double sl = 1.0 / std::cosh(zl);
    const double sr = 1.0 / std::cosh(zr);
    const double v = -constants.B0 * (sl * sl + sr * sr);
    pl[j] = mode_norm * sl;
    pr[j] = mode_norm * sr;
    // d2/dx2 sech(z/w) = (sech - 2 sech^3)/w^2
    hpl[j] = -kin * (sl - 2.0 * sl * sl * sl) * mode_norm + v * pl[j];
    hpr[j] = -kin * (sr - 2.0 * sr * sr * sr) * mode_norm + v * pr[j];
  }
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a[j] * b[j];
    return s * dx;
  };
  const double S = dot(pl, pr);
  if (S > 1.0 - 1e-12)
    throw std::invalid_argument(
        "effective_two_state_hamiltonian: modes too close for stable orthogonalization");
  const double gs = 1.0 / std::sqrt(1.0 - S * S);
  std::vector<double> prp(n), hprp(n);
  for (int j = 0; j < n; ++j) {
    prp[j] = (pr[j] - S * pl[j]) * gs;
    hprp[j] = (hpr[j] - S * hpl[j]) * gs;
  }
  TwoStateResult res;
  res.overlap = S;
  res.hamiltonian(0, 0) = dot(pl, hpl);
  res.hamiltonian(0, 1) = dot(pl, hprp);
  res.hamiltonian(1, 0) = dot(prp, hpl);
  res.hamiltonian(1, 1) = dot(prp, hprp);
  const double diff = res.hamiltonian(0, 0) - res.hamiltonian(1, 1);
  res.gap = std::sqrt(diff * diff + 4.0 * res.hamiltonian(0, 1) * res.hamiltonian(1, 0));
  return res;
}

double numerical_oscillation_frequency(const EvolutionRecord& record, const Scenario& scn) {
  const std::vector<double> p = record.left_fraction_series(scn.grid);
  const std::vector<double> t = record.times();
  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double dl = p[i] - p[i - 1];
    const double dr = p[i + 1] - p[i];
    if (dl * dr < 0.0) {
      const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
      const double off = denom != 0.0 ? 0.5 * (p[i - 1] - p[i + 1]) / denom : 0.0;
      extrema.push_back(t[i] + off * (t[i + 1] - t[i]));
    }
  }
  if (extrema.size() < 4)
    throw std::runtime_error(
        "numerical_oscillation_frequency: fewer than two oscillation periods recorded; "
        "increase t_f");
  double mean = 0.0;
  for (std::size_t i = 1; i < extrema.size(); ++i) mean += extrema[i] - extrema[i - 1];
  mean /= static_cast<double>(extrema.size() - 1);
  return kPi / mean;
}

RunResult run_scenario(const Scenario& scn) {
  validate_scenario(scn);
  RunResult out;
  WaveFunction psi0 = initial_state(scn, &out.metrics.warnings);
  Propagator prop(scn);
  out.record = prop.evolve(psi0);

  MetricsReport& m = out.metrics;
  m.final_norm2 = out.record.final_norm2;
  m.absorbed = out.record.final_absorbed;
  std::tie(m.left_fraction, m.right_fraction) = left_right_fraction(out.record.final_state);

  const bool is_x = scn.guides.size() == 2 &&
                    std::holds_alternative<XBranch>(scn.guides[0]) &&
                    std::holds_alternative<XBranch>(scn.guides[1]);
  if (is_x && scn.initial_state.kind == InitialStateKind::GroundMode) {
    const auto rt_lit = reflection_transmission(out.record, scn, FidelityConvention::Eq4Literal);
    m.reflection = rt_lit.reflection;
    m.transmission = rt_lit.transmission;
    m.total_fidelity = rt_lit.reflection + rt_lit.transmission;
    m.fidelity = rt_lit.transmission;
    const auto rt_pm = reflection_transmission(out.record, scn, FidelityConvention::PhaseMatched);
    m.fidelity_phase_matched = rt_pm.transmission;
  } else if (scn.initial_state.kind == InitialStateKind::GroundMode) {
    const GuideTrajectory& traj = scn.guides[scn.initial_state.guide];
    m.fidelity = transport_fidelity(psi0, out.record.final_state, traj, scn,
                                    FidelityConvention::Eq4Literal, &m.warnings);
    m.fidelity_phase_matched = transport_fidelity(psi0, out.record.final_state, traj, scn,
                                                  FidelityConvention::PhaseMatched);
  }
  return out;
}

std::vector<std::string> parallel_run(std::size_t n, int jobs,
                                      const std::function<void(std::size_t)>& fn) {
  std::vector<std::string> errors(n);
  if (n == 0) return errors;
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      } catch (...) {
        errors[i] = "unknown error";
      }
    }
  };
  if (workers == 1) {
    body();
    return errors;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned ww = 0; ww < workers; ++ww) pool.emplace_back(body);
  for (std::thread& th : pool) th.join();
  return errors;
}

std::vector<SweepTable> sweep_corner(const std::vector<double>& r_values,
                                     const std::vector<double>& theta_values, double t_f,
                                     const Scenario& base, int jobs) {
  std::vector<SweepTable> tables(r_values.size());
  const std::size_t nt = theta_values.size();
  std::vector<MetricsReport> reports(r_values.size() * nt);
  auto errors = parallel_run(reports.size(), jobs, [&](std::size_t idx) {
    const double r = r_values[idx / nt];
    const double theta = theta_values[idx % nt];
    Scenario scn = base;
    scn.t0 = 0.0;
    scn.t_f = t_f;
    scn.guides = {Corner{r, theta, t_f}};
    scn.initial_state = InitialStateSpec{};
    reports[idx] = run_scenario(scn).metrics;
  });
  for (std::size_t ir = 0; ir < r_values.size(); ++ir) {
    SweepTable& tab = tables[ir];
    std::ostringstream name;
    name << "theta (r=" << r_values[ir] << ")";
    tab.parameter = name.str();
    tab.values = theta_values;
    for (std::size_t it = 0; it < nt; ++it) {
      const std::size_t idx = ir * nt + it;
      tab.reports.push_back(reports[idx]);
      tab.row_status.push_back(errors[idx].empty() ? "ok" : errors[idx]);
    }
  }
  return tables;
}

SweepTable sweep_xjunction(const std::vector<double>& theta_values, double x_l,
                           const Scenario& base, int jobs) {
  SweepTable tab;
  tab.parameter = "theta";
  tab.values = theta_values;
  tab.reports.resize(theta_values.size());
  tab.row_status.assign(theta_values.size(), "ok");
  auto errors = parallel_run(theta_values.size(), jobs, [&](std::size_t i) {
    const double theta = theta_values[i];
    const double slope = std::tan(theta / 2.0);
    if (!(slope > 0.0))
      throw std::invalid_argument("xjunction: tan(theta/2) must be positive");
    Scenario scn = base;
    scn.t0 = 0.0;
    scn.t_f = x_l / slope;
    scn.guides = {XBranch{x_l, theta, XDirection::LeftToRight},
                  XBranch{x_l, theta, XDirection::RightToLeft}};
    scn.initial_state = InitialStateSpec{};
    tab.reports[i] = run_scenario(scn).metrics;
  });
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) tab.row_status[i] = errors[i];
  return tab;
}

std::vector<CouplingRow> sweep_coupling(const std::vector<double>& d_values,
                                        const Scenario& base, int jobs) {
  std::vector<CouplingRow> rows(d_values.size());
  auto errors = parallel_run(d_values.size(), jobs, [&](std::size_t i) {
    CouplingRow& row = rows[i];
    row.d = d_values[i];
    row.omega_closed = coupled_mode_frequency_closed_form(row.d);
    row.omega_two_state = effective_two_state_hamiltonian(row.d, base.constants).gap;
    Scenario scn = base;
    scn.t0 = 0.0;
    scn.t_f = 5.0 * kPi / row.omega_closed;  // 2.5 oscillation periods
    scn.guides = {Stationary{-row.d / 2.0}, Stationary{row.d / 2.0}};
    scn.initial_state = InitialStateSpec{};
    // the occupation series needs dense sampling
    scn.solver.snapshot_stride =
        std::max(1, static_cast<int>(std::floor(0.1 / scn.solver.dt + 0.5)));
    RunResult rr = run_scenario(scn);
    row.omega_pde = numerical_oscillation_frequency(rr.record, scn);
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    rows[i].d = d_values[i];
    if (!errors[i].empty()) rows[i].status = errors[i];
  }
  return rows;
}

std::vector<InterferenceRow> sweep_interference(const std::vector<double>& alphas,
                                                const Scenario& base, int jobs) {
  if (base.guides.size() != 2)
    throw std::invalid_argument("sweep_interference: scenario must have two guides");
  std::vector<InterferenceRow> rows(alphas.size());
  auto errors = parallel_run(alphas.size(), jobs, [&](std::size_t i) {
    InterferenceRow& row = rows[i];
    row.alpha = alphas[i];
    Scenario scn = base;
    scn.initial_state.kind = InitialStateKind::Superposition;
    scn.initial_state.guide_a = 0;
    scn.initial_state.guide_b = 1;
    scn.initial_state.alpha = alphas[i];
    RunResult rr = run_scenario(scn);
    row.p_left = rr.metrics.left_fraction;
    row.p_right = rr.metrics.right_fraction;
    row.absorbed = rr.metrics.absorbed;
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    rows[i].alpha = alphas[i];
    if (!errors[i].empty()) rows[i].status = errors[i];
  }
  return rows;
}

}  // namespace spinguide
