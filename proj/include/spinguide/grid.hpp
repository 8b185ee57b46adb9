#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace spinguide {

using Complex = std::complex<double>;

/// Uniform periodic grid over [x_min, x_max). The wrap point x_max is not a
/// stored sample, so FFT wavenumbers 2*pi*m/(x_max-x_min) are exact.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  double dx = 0.0;

  Grid1D() = default;
  Grid1D(double xmin, double xmax, int n);

  double length() const { return x_max - x_min; }
  double position(int j) const { return x_min + dx * j; }
  /// FFT wavenumber of bin m (m in [0, n_points)).
  double wavenumber(int m) const;

  friend bool operator==(const Grid1D& a, const Grid1D& b) {
    return a.x_min == b.x_min && a.x_max == b.x_max && a.n_points == b.n_points;
  }
};

/// Complex amplitude field over a Grid1D.
struct WaveFunction {
  Grid1D grid;
  std::vector<Complex> amp;

  WaveFunction() = default;
  explicit WaveFunction(const Grid1D& g) : grid(g), amp(g.n_points, Complex{0.0, 0.0}) {}

  int size() const { return static_cast<int>(amp.size()); }
};

/// Discretized <a|b> = sum_j conj(a_j) b_j dx. Grids must match exactly.
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

/// <a|a>.real(), accumulated in real arithmetic so it is exactly >= 0.
double norm_squared(const WaveFunction& a);

/// Pointwise sampling of f on the grid; no normalization. Non-finite samples
/// are a hard error naming the offending point.
WaveFunction sample(const Grid1D& grid, const std::function<Complex(double)>& f);

/// Scales to unit norm; throws on a zero state.
void normalize(WaveFunction& psi);

/// Band-limited translation: result(x) = psi(x + shift), via FFT phase ramp.
WaveFunction band_limited_shift(const WaveFunction& psi, double shift);

/// Band-limited evaluation of the trigonometric interpolant at arbitrary
/// points (used to compare grid states against off-grid chain sites).
std::vector<Complex> band_limited_values(const WaveFunction& psi,
                                         const std::vector<double>& points);

}  // namespace spinguide
