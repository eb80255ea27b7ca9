#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtdisc {

enum class Orientation { HankelGT, ToeplitzGT };

std::string to_string(Orientation o);
Orientation orientation_from_string(const std::string& s);

// n x n matrix with entries in {-1,+1}. Indices are 1-based at the API
// boundary (matching the j,k ranges of the formulas); storage is row-major.
struct SignMatrix {
  std::size_t n = 0;
  Orientation orientation = Orientation::HankelGT;
  std::vector<double> entries;

  double at(std::size_t j, std::size_t k) const { return entries[(j - 1) * n + (k - 1)]; }
};

// Shifted Hilbert matrix H[j][k] = 1 / (n + 1/2 - j - k), 1-based.
// Symmetric, constant along anti-diagonals, sign-aligned with gt_hankel(n).
struct HilbertMatrix {
  std::size_t n = 0;
  std::vector<double> entries;

  double at(std::size_t j, std::size_t k) const { return entries[(j - 1) * n + (k - 1)]; }
};

// G[j][k] = +1 iff j + k <= n, else -1.
SignMatrix gt_hankel(std::size_t n);

// G[j][k] = +1 iff j >= k, else -1.
SignMatrix gt_toeplitz(std::size_t n);

HilbertMatrix hilbert(std::size_t n);

// Entrywise L1 norm: sum of |entries|, compensated summation.
double l1_norm(std::span<const double> entries);
inline double l1_norm(const HilbertMatrix& h) { return l1_norm(std::span<const double>(h.entries)); }
inline double l1_norm(const SignMatrix& g) { return l1_norm(std::span<const double>(g.entries)); }

// ||hilbert(n)||_1 by direct double sum, streamed without the n^2 table.
double hilbert_l1(std::size_t n);

// ||hilbert(n)||_1 summed anti-diagonal by anti-diagonal:
//   sum_{l=1}^{n-1} (n-l)/(l-1/2) + sum_{l=0}^{n-1} (n-l)/(l+1/2).
// Agrees with the direct double sum to 1e-9 relative.
double hilbert_l1_by_diagonals(std::size_t n);

struct SpectralOptions {
  double tol = 1e-10;
  std::size_t max_iters = 1'000'000;
  std::uint64_t restart_seed = 0x5eed5eedULL;
};

class SpectralNonConvergence : public std::runtime_error {
public:
  SpectralNonConvergence(double last, std::size_t iters)
      : std::runtime_error("spectral norm: power iteration did not converge after " +
                           std::to_string(iters) + " iterations (last estimate " +
                           std::to_string(last) + ")"),
        last_estimate(last), iterations(iters) {}
  double last_estimate;
  std::size_t iterations;
};

using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

// Largest singular value of a symmetric matrix given by its matvec, via power
// iteration on M^2: a deterministic all-ones start plus one seeded random
// restart, each stopped on relative change <= tol of the M^2 eigenvalue
// estimate. Throws SpectralNonConvergence past max_iters.
double spectral_norm_symmetric(std::size_t n, const MatVec& apply, const SpectralOptions& opts = {});

// Dense overload; rejects non-symmetric input.
double spectral_norm_symmetric(const std::vector<double>& dense, std::size_t n,
                               const SpectralOptions& opts = {});

// spectral_norm_symmetric(hilbert(n)) with an FFT-based anti-diagonal matvec,
// O(n log n) per application instead of O(n^2).
double hilbert_spectral_norm(std::size_t n, const SpectralOptions& opts = {});

} // namespace gtdisc
