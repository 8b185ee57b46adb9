#include "spinguide/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "spinguide/fft.hpp"

namespace spinguide {

Grid1D::Grid1D(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_points(n) {
  if (!(xmax > xmin)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
  if (n < 16) throw std::invalid_argument("Grid1D: n_points must be at least 16");
  dx = (xmax - xmin) / n;
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("Grid1D: invalid spacing");
}

double Grid1D::wavenumber(int m) const {
  const double dk = 2.0 * std::numbers::pi / length();
  const int mm = (m < (n_points + 1) / 2) ? m : m - n_points;
  return dk * mm;
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_product: mismatched grids");
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < a.amp.size(); ++j) {
    const Complex &u = a.amp[j], &v = b.amp[j];
    re += u.real() * v.real() + u.imag() * v.imag();
    im += u.real() * v.imag() - u.imag() * v.real();
  }
  return Complex{re * a.grid.dx, im * a.grid.dx};
}

double norm_squared(const WaveFunction& a) {
  double s = 0.0;
  for (const Complex& u : a.amp) s += u.real() * u.real() + u.imag() * u.imag();
  return s * a.grid.dx;
}

WaveFunction sample(const Grid1D& grid, const std::function<Complex(double)>& f) {
  WaveFunction psi(grid);
  for (int j = 0; j < grid.n_points; ++j) {
    const Complex v = f(grid.position(j));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "sample: non-finite value at x = " << grid.position(j) << " (index " << j << ")";
      throw std::domain_error(msg.str());
    }
    psi.amp[j] = v;
  }
  return psi;
}

void normalize(WaveFunction& psi) {
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0)) throw std::domain_error("normalize: zero state");
  const double s = 1.0 / std::sqrt(n2);
  for (Complex& u : psi.amp) u *= s;
}

WaveFunction band_limited_shift(const WaveFunction& psi, double shift) {
  const int n = psi.grid.n_points;
  Fft fft(n);
  std::vector<Complex> hat(n);
  fft.forward(psi.amp.data(), hat.data());
  for (int m = 0; m < n; ++m) {
    const double k = psi.grid.wavenumber(m);
    hat[m] *= std::polar(1.0, k * shift);
  }
  WaveFunction out(psi.grid);
  fft.inverse(hat.data(), out.amp.data());
  const double inv_n = 1.0 / n;
  for (Complex& u : out.amp) u *= inv_n;
  return out;
}

std::vector<Complex> band_limited_values(const WaveFunction& psi,
                                         const std::vector<double>& points) {
  const int n = psi.grid.n_points;
  Fft fft(n);
  std::vector<Complex> hat(n);
  fft.forward(psi.amp.data(), hat.data());
  std::vector<Complex> out(points.size());
  const double inv_n = 1.0 / n;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p] - psi.grid.x_min;
    Complex acc{0.0, 0.0};
    for (int m = 0; m < n; ++m) acc += hat[m] * std::polar(1.0, psi.grid.wavenumber(m) * x);
    out[p] = acc * inv_n;
  }
  return out;
}

}  // namespace spinguide
