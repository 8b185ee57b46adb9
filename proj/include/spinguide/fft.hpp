#pragma once

#include <complex>
#include <vector>

namespace spinguide {

/// Complex-to-complex FFT of fixed size, wrapping FFTW with deterministic
/// (FFTW_ESTIMATE) plans. Plan creation is serialized internally; execution on
/// distinct instances is safe from concurrent threads.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }

  // Unnormalized transforms; inverse(forward(x)) == n * x.
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int n_;
  void* plan_fwd_;
  void* plan_inv_;
};

}  // namespace spinguide
