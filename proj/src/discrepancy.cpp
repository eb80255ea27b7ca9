#include "gtdisc/discrepancy.hpp"

#include "gtdisc/fft.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace gtdisc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_sizes(const SignMatrix& g, const EntryDistribution& mu, std::size_t nx, std::size_t ny) {
  if (g.n == 0 || g.n != mu.n || nx != g.n || ny != g.n)
    throw std::invalid_argument("bilinear form: size mismatch");
}

struct KahanC {
  cplx sum{0.0, 0.0};
  cplx comp{0.0, 0.0};
  void add(cplx v) {
    cplx a = v - comp;
    cplx t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  }
};

struct KahanR {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double a = v - comp;
    double t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  }
};

std::vector<double> weighted_matrix(const SignMatrix& g, const EntryDistribution& mu) {
  std::vector<double> w(g.n * g.n);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = g.entries[i] * mu.weights[i];
  return w;
}

} // namespace

cplx eval_bilinear(const SignMatrix& g, const EntryDistribution& mu, std::span<const cplx> x,
                   std::span<const cplx> y) {
  check_sizes(g, mu, x.size(), y.size());
  const std::size_t n = g.n;
  KahanC acc;
  for (std::size_t j = 0; j < n; ++j) {
    const double* grow = g.entries.data() + j * n;
    const double* mrow = mu.weights.data() + j * n;
    KahanC row;
    for (std::size_t k = 0; k < n; ++k) row.add(grow[k] * mrow[k] * y[k]);
    acc.add(x[j] * row.sum);
  }
  return acc.sum;
}

double eval_bilinear_signs(const SignMatrix& g, const EntryDistribution& mu,
                           std::span<const int> x, std::span<const int> y) {
  check_sizes(g, mu, x.size(), y.size());
  const std::size_t n = g.n;
  KahanR acc;
  for (std::size_t j = 0; j < n; ++j) {
    const double* grow = g.entries.data() + j * n;
    const double* mrow = mu.weights.data() + j * n;
    KahanR row;
    for (std::size_t k = 0; k < n; ++k) row.add(grow[k] * mrow[k] * static_cast<double>(y[k]));
    acc.add(static_cast<double>(x[j]) * row.sum);
  }
  return acc.sum;
}

namespace {

// Sign pattern at Gray position idx: bit b of gray(idx) set means x_{b+2} = -1
// (x_1 is pinned to +1).
std::vector<int> gray_signs(std::size_t n, std::uint64_t idx) {
  std::uint64_t gray = idx ^ (idx >> 1);
  std::vector<int> x(n, 1);
  for (std::size_t b = 0; b + 1 < n; ++b)
    if ((gray >> b) & 1) x[b + 1] = -1;
  return x;
}

struct ChunkBest {
  double value = -1.0;
  std::uint64_t index = 0;
};

// Scans Gray positions [start, start+count) and returns the best objective.
ChunkBest scan_chunk(const std::vector<double>& w, std::size_t n, std::uint64_t start,
                     std::uint64_t count) {
  std::vector<int> x = gray_signs(n, start);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    KahanR acc;
    for (std::size_t j = 0; j < n; ++j) acc.add(w[j * n + k] * static_cast<double>(x[j]));
    col[k] = acc.sum;
  }
  auto objective = [&]() {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::abs(col[k]);
    return s;
  };
  ChunkBest best{objective(), start};
  for (std::uint64_t step = 1; step < count; ++step) {
    std::uint64_t pos = start + step;
    unsigned b = static_cast<unsigned>(std::countr_zero(pos)); // flipped Gray bit
    std::size_t j = b + 1;                                     // 0-based row (x_{b+2})
    double delta = -2.0 * static_cast<double>(x[j]);
    x[j] = -x[j];
    const double* row = w.data() + j * n;
    for (std::size_t k = 0; k < n; ++k) col[k] += delta * row[k];
    double val = objective();
    if (val > best.value) best = {val, pos};
  }
  return best;
}

} // namespace

BooleanWitnessPair disc_exact_boolean(const SignMatrix& g, const EntryDistribution& mu,
                                      unsigned threads) {
  if (g.n != mu.n) throw std::invalid_argument("disc_exact_boolean: size mismatch");
  const std::size_t n = g.n;
  if (n == 0 || n > 28) throw std::invalid_argument("disc_exact_boolean: n must be in [1, 28]");
  const std::vector<double> w = weighted_matrix(g, mu);

  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  const std::uint64_t chunk = std::min<std::uint64_t>(total, std::uint64_t{1} << 14);
  const std::uint64_t nchunks = total / chunk;

  std::vector<ChunkBest> per_chunk(nchunks);
  unsigned nthreads = threads == 0 ? std::thread::hardware_concurrency() : threads;
  nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(nchunks)));
  if (nthreads == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c) per_chunk[c] = scan_chunk(w, n, c * chunk, chunk);
  } else {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
      for (std::uint64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1))
        per_chunk[c] = scan_chunk(w, n, c * chunk, chunk);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Fixed chunk-order reduction keeps the argmax independent of thread count.
  ChunkBest best = per_chunk[0];
  for (std::uint64_t c = 1; c < nchunks; ++c)
    if (per_chunk[c].value > best.value) best = per_chunk[c];

  BooleanWitnessPair out;
  out.x = gray_signs(n, best.index);
  out.y.assign(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    KahanR acc;
    for (std::size_t j = 0; j < n; ++j) acc.add(w[j * n + k] * static_cast<double>(out.x[j]));
    out.y[k] = acc.sum < 0.0 ? -1 : 1; // zero sums pinned to +1
  }
  out.value = std::abs(eval_bilinear_signs(g, mu, out.x, out.y));
  return out;
}

namespace {

WitnessPair alternate(const SignMatrix& g, const EntryDistribution& mu,
                      const std::vector<double>& w, std::vector<cplx> x, std::size_t max_iters) {
  const std::size_t n = g.n;
  std::vector<cplx> y(n, cplx{1.0, 0.0});
  std::vector<cplx> c(n);
  double obj = -1.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    // y-step: c_k = sum_j w[j][k] x_j, y_k = conj(c_k)/|c_k|.
    std::fill(c.begin(), c.end(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = w.data() + j * n;
      for (std::size_t k = 0; k < n; ++k) c[k] += row[k] * x[j];
    }
    double obj_y = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double a = std::abs(c[k]);
      obj_y += a;
      y[k] = a > 0.0 ? std::conj(c[k]) / a : cplx{1.0, 0.0};
    }
    // x-step: d_j = sum_k w[j][k] y_k.
    double obj_x = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = w.data() + j * n;
      cplx d{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) d += row[k] * y[k];
      double a = std::abs(d);
      obj_x += a;
      x[j] = a > 0.0 ? std::conj(d) / a : cplx{1.0, 0.0};
    }
    if (obj_x - obj <= 1e-13 * std::max(1.0, obj_x)) {
      obj = obj_x;
      break;
    }
    obj = obj_x;
  }
  WitnessPair out{std::move(x), std::move(y), 0.0};
  // One final y-step so the pair is consistent, then an exact re-evaluation.
  std::fill(c.begin(), c.end(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = w.data() + j * n;
    for (std::size_t k = 0; k < n; ++k) c[k] += row[k] * out.x[j];
  }
  for (std::size_t k = 0; k < n; ++k) {
    double a = std::abs(c[k]);
    out.y[k] = a > 0.0 ? std::conj(c[k]) / a : cplx{1.0, 0.0};
  }
  out.value = std::abs(eval_bilinear(g, mu, out.x, out.y));
  return out;
}

} // namespace

WitnessPair disc_alternating(const SignMatrix& g, const EntryDistribution& mu,
                             std::size_t restarts, std::size_t max_iters, std::uint64_t seed) {
  if (g.n != mu.n) throw std::invalid_argument("disc_alternating: size mismatch");
  if (restarts == 0) throw std::invalid_argument("disc_alternating: restarts must be >= 1");
  const std::size_t n = g.n;
  const std::vector<double> w = weighted_matrix(g, mu);
  std::mt19937_64 rng(seed);
  WitnessPair best;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<cplx> x0(n, cplx{1.0, 0.0});
    if (r > 0)
      for (auto& v : x0) {
        double theta = kTwoPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        v = std::polar(1.0, theta);
      }
    WitnessPair cand = alternate(g, mu, w, std::move(x0), max_iters);
    if (cand.value > best.value || best.x.empty()) best = std::move(cand);
  }
  return best;
}

WitnessPair disc_alternating_from(const SignMatrix& g, const EntryDistribution& mu,
                                  std::vector<cplx> x0, std::size_t max_iters) {
  if (g.n != mu.n || x0.size() != g.n)
    throw std::invalid_argument("disc_alternating_from: size mismatch");
  const std::vector<double> w = weighted_matrix(g, mu);
  return alternate(g, mu, w, std::move(x0), max_iters);
}

CharacterScan character_witness_scan(const EntryDistribution& mu, std::size_t grid_t) {
  const std::size_t n = mu.n;
  if (n == 0) throw std::invalid_argument("character_witness_scan: empty distribution");
  if (grid_t < 2 * n) throw std::invalid_argument("character_witness_scan: grid must be >= 2n");

  // Diagonal aggregates against the Toeplitz greater-than signs:
  // a_d = (+-1) * sum_{j-k=d} mu[j][k], sign + for d >= 0.
  std::vector<cplx> diag(grid_t, cplx{0.0, 0.0});
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      long d = static_cast<long>(j) - static_cast<long>(k);
      double sgn = d >= 0 ? 1.0 : -1.0;
      std::size_t slot = static_cast<std::size_t>((d % static_cast<long>(grid_t) +
                                                   static_cast<long>(grid_t)) %
                                                  static_cast<long>(grid_t));
      diag[slot] += sgn * mu.at(j, k);
    }

  std::vector<cplx> phi(grid_t);
  DftPlan plan(grid_t);
  plan.backward(diag.data(), phi.data()); // phi[s] = sum_d a_d e^{2 pi i d s / T}

  std::size_t best_s = 0;
  double best = -1.0;
  for (std::size_t s = 0; s < grid_t; ++s) {
    double a = std::abs(phi[s]);
    if (a > best) {
      best = a;
      best_s = s;
    }
  }

  CharacterScan out;
  out.t_star = static_cast<double>(best_s) / static_cast<double>(grid_t);
  out.value = best;
  out.witness.x.resize(n);
  out.witness.y.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    out.witness.x[j - 1] = std::polar(1.0, kTwoPi * static_cast<double>(j) * out.t_star);
    out.witness.y[j - 1] = std::polar(1.0, -kTwoPi * static_cast<double>(j) * out.t_star);
  }
  out.witness.value = best;
  return out;
}

BooleanWitnessPair round_witness(const WitnessPair& pair, const SignMatrix& g,
                                 const EntryDistribution& mu, std::size_t trials,
                                 std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("round_witness: trials must be >= 1");
  const std::size_t n = g.n;
  if (pair.x.size() != n || pair.y.size() != n)
    throw std::invalid_argument("round_witness: size mismatch");
  std::mt19937_64 rng(seed);
  BooleanWitnessPair best;
  best.value = -1.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    double theta_x = 0.0, theta_y = 0.0;
    if (trial > 0) {
      theta_x = kTwoPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      theta_y = kTwoPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
    BooleanWitnessPair cand;
    cand.x.resize(n);
    cand.y.resize(n);
    cplx px = std::polar(1.0, theta_x), py = std::polar(1.0, theta_y);
    for (std::size_t i = 0; i < n; ++i) {
      cand.x[i] = (px * pair.x[i]).real() >= 0.0 ? 1 : -1;
      cand.y[i] = (py * pair.y[i]).real() >= 0.0 ? 1 : -1;
    }
    cand.value = std::abs(eval_bilinear_signs(g, mu, cand.x, cand.y));
    if (cand.value > best.value) best = std::move(cand);
  }
  return best;
}

UpperBounds spectral_upper_bound(std::size_t n, const SpectralOptions& opts) {
  if (n < 2) throw std::invalid_argument("spectral_upper_bound: n must be >= 2");
  double l1 = hilbert_l1(n);
  UpperBounds b;
  b.loose = std::numbers::pi * static_cast<double>(n) / l1;
  b.tight = static_cast<double>(n) * hilbert_spectral_norm(n, opts) / l1;
  return b;
}

EntryDistribution hankel_to_toeplitz(const EntryDistribution& mu) {
  const std::size_t n = mu.n;
  EntryDistribution rho{n, std::vector<double>(n * n), mu.meta};
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = 1; b <= n; ++b)
      rho.weights[(a - 1) * n + (b - 1)] = mu.at(n + 1 - b, a);
  return rho;
}

} // namespace gtdisc
