#pragma once

#include "gtdisc/distributions.hpp"
#include "gtdisc/matrices.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace gtdisc {

using cplx = std::complex<double>;

// Complex witnesses of sup-norm 1 and the achieved |bilinear| value.
struct WitnessPair {
  std::vector<cplx> x;
  std::vector<cplx> y;
  double value = 0.0;
};

struct BooleanWitnessPair {
  std::vector<int> x; // entries exactly +-1
  std::vector<int> y;
  double value = 0.0;
};

// sum_{j,k} G[j][k] mu[j][k] x_j y_k with compensated accumulation.
cplx eval_bilinear(const SignMatrix& g, const EntryDistribution& mu, std::span<const cplx> x,
                   std::span<const cplx> y);
double eval_bilinear_signs(const SignMatrix& g, const EntryDistribution& mu,
                           std::span<const int> x, std::span<const int> y);

// Exact boolean maximum: max over x in {+-1}^n of sum_k |c_k(x)|, where
// c_k = sum_j G[j][k] mu[j][k] x_j and the optimal y takes column-sum signs
// (zero sums get +1). Gray-code single-flip enumeration over x with x_1 = +1
// (global sign symmetry), parallel over fixed-size chunks so the result is
// deterministic regardless of thread count. Guarded to n <= 28.
BooleanWitnessPair disc_exact_boolean(const SignMatrix& g, const EntryDistribution& mu,
                                      unsigned threads = 0);

// Heuristic complex maximizer: alternating unit-phase half-steps; the
// objective is nondecreasing per half-step. First restart starts from
// all-ones, the others from seeded uniform random phases.
WitnessPair disc_alternating(const SignMatrix& g, const EntryDistribution& mu,
                             std::size_t restarts, std::size_t max_iters, std::uint64_t seed);

// Alternating maximization from a caller-supplied start.
WitnessPair disc_alternating_from(const SignMatrix& g, const EntryDistribution& mu,
                                  std::vector<cplx> x0, std::size_t max_iters);

struct CharacterScan {
  double t_star = 0.0;
  double value = 0.0;
  WitnessPair witness;
};

// Evaluates Phi_mu(t) = sum_{j,k} Gt[j][k] mu[j][k] e^{2 pi i (j-k) t}
// (Toeplitz orientation) on the uniform grid s/T via diagonal aggregates and
// one length-T DFT; returns the grid maximizer and the character witness
// x_j = e^{2 pi i j t*}, y_k = e^{-2 pi i k t*}. Requires T >= 2n.
CharacterScan character_witness_scan(const EntryDistribution& mu, std::size_t grid_t);

// Random-global-phase sign rounding; trial 1 uses phase 0 for both vectors,
// so an already-boolean input never loses value. Values are exact boolean
// re-evaluations.
BooleanWitnessPair round_witness(const WitnessPair& pair, const SignMatrix& g,
                                 const EntryDistribution& mu, std::size_t trials,
                                 std::uint64_t seed);

struct UpperBounds {
  double loose = 0.0; // pi * n / ||H||_1
  double tight = 0.0; // n * sigma_max(H) / ||H||_1
};

UpperBounds spectral_upper_bound(std::size_t n, const SpectralOptions& opts = {});

// Orientation bridge: disc_mu(gt_hankel(n)) = disc_rho(gt_toeplitz(n)) with
// rho[a][b] = mu[n+1-b][a] (row reversal composed with transposition and a
// global sign, both discrepancy-invariant).
EntryDistribution hankel_to_toeplitz(const EntryDistribution& mu);

} // namespace gtdisc
