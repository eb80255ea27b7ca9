#include "gtdisc/matrices.hpp"

#include "gtdisc/fft.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace gtdisc {

std::string to_string(Orientation o) {
  return o == Orientation::HankelGT ? "HankelGT" : "ToeplitzGT";
}

Orientation orientation_from_string(const std::string& s) {
  if (s == "HankelGT") return Orientation::HankelGT;
  if (s == "ToeplitzGT") return Orientation::ToeplitzGT;
  throw std::invalid_argument("unknown orientation: " + s);
}

SignMatrix gt_hankel(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gt_hankel: n must be positive");
  SignMatrix g{n, Orientation::HankelGT, std::vector<double>(n * n)};
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k)
      g.entries[(j - 1) * n + (k - 1)] = (j + k <= n) ? 1.0 : -1.0;
  return g;
}

SignMatrix gt_toeplitz(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gt_toeplitz: n must be positive");
  SignMatrix g{n, Orientation::ToeplitzGT, std::vector<double>(n * n)};
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k)
      g.entries[(j - 1) * n + (k - 1)] = (j >= k) ? 1.0 : -1.0;
  return g;
}

HilbertMatrix hilbert(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hilbert: n must be positive");
  HilbertMatrix h{n, std::vector<double>(n * n)};
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      double denom = static_cast<double>(n) + 0.5 - static_cast<double>(j + k);
      h.entries[(j - 1) * n + (k - 1)] = 1.0 / denom;
    }
  return h;
}

double l1_norm(std::span<const double> entries) {
  double sum = 0.0, comp = 0.0; // Kahan
  for (double v : entries) {
    double a = std::abs(v) - comp;
    double t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  }
  return sum;
}

double hilbert_l1(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hilbert_l1: n must be positive");
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      double a = std::abs(1.0 / (static_cast<double>(n) + 0.5 - static_cast<double>(j + k))) - comp;
      double t = sum + a;
      comp = (t - sum) - a;
      sum = t;
    }
  return sum;
}

double hilbert_l1_by_diagonals(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hilbert_l1_by_diagonals: n must be positive");
  double sum = 0.0, comp = 0.0;
  auto add = [&](double a) {
    a -= comp;
    double t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  };
  for (std::size_t l = 1; l < n; ++l)
    add(static_cast<double>(n - l) / (static_cast<double>(l) - 0.5));
  for (std::size_t l = 0; l < n; ++l)
    add(static_cast<double>(n - l) / (static_cast<double>(l) + 0.5));
  return sum;
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// One power-iteration run on M^2 from the given start; returns the converged
// sigma estimate or throws past the iteration cap.
double power_run(std::size_t n, const MatVec& apply, std::vector<double> v,
                 const SpectralOptions& opts) {
  double nv = norm2(v);
  if (nv == 0.0) throw std::invalid_argument("spectral norm: zero start vector");
  for (auto& x : v) x /= nv;
  std::vector<double> w(n), u(n);
  double lambda = 0.0;
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    apply(v, u);
    apply(u, w); // w = M^2 v
    double nw = norm2(w);
    if (nw == 0.0) return 0.0; // M v = 0: operator is zero on this cycle
    double est = nw;           // ||M^2 v|| -> lambda_max(M^2) since ||v|| = 1
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(est - lambda) <= opts.tol * est) return std::sqrt(est);
    lambda = est;
  }
  throw SpectralNonConvergence(std::sqrt(lambda), opts.max_iters);
}

} // namespace

double spectral_norm_symmetric(std::size_t n, const MatVec& apply, const SpectralOptions& opts) {
  if (n == 0) throw std::invalid_argument("spectral norm: n must be positive");
  if (opts.tol <= 0.0) throw std::invalid_argument("spectral norm: tol must be positive");
  std::vector<double> ones(n, 1.0);
  double a = power_run(n, apply, std::move(ones), opts);
  std::mt19937_64 rng(opts.restart_seed);
  std::vector<double> rnd(n);
  for (auto& x : rnd) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  double b = power_run(n, apply, std::move(rnd), opts);
  return std::max(a, b);
}

double spectral_norm_symmetric(const std::vector<double>& dense, std::size_t n,
                               const SpectralOptions& opts) {
  if (dense.size() != n * n) throw std::invalid_argument("spectral norm: size mismatch");
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (dense[j * n + k] != dense[k * n + j])
        throw std::invalid_argument("spectral norm: matrix is not symmetric");
  MatVec apply = [&dense, n](std::span<const double> x, std::span<double> y) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      const double* row = dense.data() + j * n;
      for (std::size_t k = 0; k < n; ++k) s += row[k] * x[k];
      y[j] = s;
    }
  };
  return spectral_norm_symmetric(n, apply, opts);
}

namespace {

// y_j = sum_k h_{(j-1)+(k-1)} x_k for the anti-diagonal kernel h of hilbert(n),
// as one linear convolution with x reversed, done by FFT of length >= 3n-2.
class HankelApply {
public:
  explicit HankelApply(std::size_t n)
      : n_(n), len_(std::bit_ceil(3 * n)), plan_(len_), kernel_hat_(len_), buf_(len_), tmp_(len_) {
    std::vector<cplx> kernel(len_, cplx{0.0, 0.0});
    for (std::size_t d = 0; d + 1 < 2 * n; ++d) {
      double denom = static_cast<double>(n) + 0.5 - static_cast<double>(d + 2);
      kernel[d] = cplx{1.0 / denom, 0.0};
    }
    plan_.forward(kernel.data(), kernel_hat_.data());
  }

  void operator()(std::span<const double> x, std::span<double> y) {
    std::fill(buf_.begin(), buf_.end(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n_; ++k) buf_[n_ - 1 - k] = cplx{x[k], 0.0};
    plan_.forward(buf_.data(), tmp_.data());
    for (std::size_t i = 0; i < len_; ++i) tmp_[i] *= kernel_hat_[i];
    plan_.backward(tmp_.data(), buf_.data());
    double scale = 1.0 / static_cast<double>(len_);
    for (std::size_t j = 0; j < n_; ++j) y[j] = buf_[j + n_ - 1].real() * scale;
  }

private:
  std::size_t n_;
  std::size_t len_;
  DftPlan plan_;
  std::vector<cplx> kernel_hat_;
  std::vector<cplx> buf_;
  std::vector<cplx> tmp_;
};

} // namespace

double hilbert_spectral_norm(std::size_t n, const SpectralOptions& opts) {
  if (n == 0) throw std::invalid_argument("hilbert_spectral_norm: n must be positive");
  HankelApply fast(n);
  MatVec apply = [&fast](std::span<const double> x, std::span<double> y) { fast(x, y); };
  return spectral_norm_symmetric(n, apply, opts);
}

} // namespace gtdisc
