#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gtdisc {

using cplx = std::complex<double>;

// Reusable complex-to-complex DFT of a fixed length, backed by FFTW.
// forward:  out[k] = sum_s in[s] e^{-2 pi i k s / N}
// backward: out[s] = sum_k in[k] e^{+2 pi i k s / N}   (unscaled)
class DftPlan {
public:
  explicit DftPlan(std::size_t length);
  ~DftPlan();
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  std::size_t length() const { return n_; }
  void forward(const cplx* in, cplx* out) const;
  void backward(const cplx* in, cplx* out) const;

private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

} // namespace gtdisc
