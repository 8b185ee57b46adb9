#include "spinguide/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace spinguide {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Fft: size must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  std::vector<std::complex<double>> tmp(static_cast<std::size_t>(n));
  auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
  // FFTW_UNALIGNED so the plan accepts any caller buffer in execute_dft.
  plan_fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inv_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("Fft: fftw plan creation failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fft::inverse(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_inv_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace spinguide
