#include "gtdisc/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace gtdisc {

namespace {
// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

DftPlan::DftPlan(std::size_t length) : n_(length) {
  if (length == 0) throw std::invalid_argument("DftPlan: length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  // Planned with FFTW_ESTIMATE so the buffers passed at execution time are
  // not touched during planning. Execution is always out-of-place, so the
  // plan must be created out-of-place too (new-array execution requires the
  // same in/out-of-place layout as the original plan).
  fftw_complex* scratch_in = fftw_alloc_complex(length);
  fftw_complex* scratch_out = fftw_alloc_complex(length);
  fwd_ = fftw_plan_dft_1d(static_cast<int>(length), scratch_in, scratch_out, FFTW_FORWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(length), scratch_in, scratch_out, FFTW_BACKWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch_out);
  fftw_free(scratch_in);
  if (fwd_ == nullptr || bwd_ == nullptr) throw std::runtime_error("DftPlan: fftw planning failed");
}

DftPlan::~DftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void DftPlan::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void DftPlan::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

} // namespace gtdisc
