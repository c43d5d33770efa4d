#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace bbm::detail {

// Real <-> half-complex transforms of length G. Plans are created once per
// length and executed through the new-array interface, which FFTW documents as
// thread safe.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    std::vector<double> r(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> c(static_cast<std::size_t>(n / 2 + 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(n, r.data(), as_fftw(c.data()), flags);
    backward_ = fftw_plan_dft_c2r_1d(n, as_fftw(c.data()), r.data(), flags | FFTW_DESTROY_INPUT);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  int size() const { return n_; }

  // out[k] = sum_j in[j] exp(-2 pi i jk / n), k = 0..n/2
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    std::vector<double> scratch(in.begin(), in.end());
    fftw_execute_dft_r2c(forward_, scratch.data(), as_fftw(out.data()));
  }

  // out[j] = sum_k in[k] exp(2 pi i jk / n) over the Hermitian extension of in.
  // `in` is consumed.
  void backward(std::span<std::complex<double>> in, std::span<double> out) const {
    fftw_execute_dft_c2r(backward_, as_fftw(in.data()), out.data());
  }

 private:
  static fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

  int n_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

inline const RealFft& real_fft(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

}  // namespace bbm::detail
