#pragma once

#include "gtdisc/discrepancy.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

namespace gtdisc {

enum class TargetSide { NonnegativeHalf, NegativeHalf };

std::string to_string(TargetSide s);
TargetSide side_from_string(const std::string& s);

// Half-line Fourier interpolation target on [-n, n]:
//   NonnegativeHalf: 1 for 0 <= l <= n, 0 for -n <= l < 0
//   NegativeHalf:    1 for l < 0, 0 for l >= 0
struct FourierTarget {
  std::size_t degree = 0;
  TargetSide side = TargetSide::NonnegativeHalf;

  double operator()(long l) const {
    return side == TargetSide::NonnegativeHalf ? (l >= 0 ? 1.0 : 0.0) : (l < 0 ? 1.0 : 0.0);
  }
};

struct SolverOptions {
  std::size_t max_iters = 0; // 0 -> 50 * T
  double step = 1.0;         // soft-threshold level per Douglas-Rachford sweep
  double tol = 1e-10;        // relative norm decrease over a 100-iteration window
  double relax = 1.0;        // Douglas-Rachford relaxation, in (0, 2)
};

// Discrete complex measure on the uniform grid t_s = s/T, assigning mass
// atoms[s]/T to t_s. Atoms satisfy the 2n+1 band constraints of its target.
struct CircleMeasure {
  std::size_t grid = 0; // T
  std::size_t degree = 0;
  TargetSide side = TargetSide::NonnegativeHalf;
  std::vector<cplx> atoms;
  double norm = 0.0; // (1/T) sum |atoms|
  bool converged = false;
  SolverOptions solver;
};

// min (1/T) sum |v_s| subject to vhat(l) = target(l) for |l| <= n, by
// Douglas-Rachford splitting: complex soft-thresholding against exact
// projection onto the band constraints (two length-T DFTs per iteration).
// Requires T >= 4n+1. Returns the feasible iterate of smallest norm;
// non-convergence past max_iters is flagged via converged = false.
CircleMeasure synthesize_measure(const FourierTarget& target, std::size_t grid_t,
                                 const SolverOptions& opts = {});

// nuhat(l) = (1/T) sum_s v_s e^{2 pi i l t_s}; |l| <= T/2 required.
cplx measure_fourier(const CircleMeasure& measure, long l);

double measure_norm(const CircleMeasure& measure);

// max over |l| <= degree of |nuhat(l) - target(l)|.
double fourier_residual(const CircleMeasure& measure);

// 1 / (2 ||nu||): a lower bound on disc_mu(G_n) valid for every mu on the
// measure's half-line side.
double certified_lower_bound(const CircleMeasure& measure);

struct LowerBoundCertificate {
  double claimed_disc_lower = 0.0;
  double pr_ge = 0.0;    // Pr_mu[j >= k]
  double chain_sum = 0.0; // |sum G mu nuhat(j-k)|
  double scan_max = 0.0;
  double t_star = 0.0;
  TargetSide side = TargetSide::NonnegativeHalf;
  double measure_norm = 0.0;
  WitnessPair witness;
  std::string mu_id;
};

class CertificateError : public std::runtime_error {
public:
  CertificateError(const std::string& msg, double pr_ge, double norm, double scan_max)
      : std::runtime_error(msg + " (P=" + std::to_string(pr_ge) +
                           ", norm=" + std::to_string(norm) +
                           ", scan max=" + std::to_string(scan_max) + ")"),
        pr_ge(pr_ge), norm(norm), scan_max(scan_max) {}
  double pr_ge, norm, scan_max;
};

// Verifies the lower-bound chain for a Toeplitz-orientation distribution mu:
// picks the half-line side from Pr_mu[j >= k] (re-synthesizing the reflected
// measure when needed), checks |sum G mu nuhat(j-k)| >= 1/2 - 1e-10, and
// scans for a character witness with |Phi(t*)| >= (1/2 - 1e-6)/||nu||.
// The scan grid is a multiple of the measure grid of at least scan_grid
// points (scan_grid = 0 uses the measure grid itself).
LowerBoundCertificate verify_certificate(const EntryDistribution& mu, const CircleMeasure& measure,
                                         std::size_t scan_grid = 0);

// Synthesis cache keyed by (degree, side, T, solver params); concurrent
// lookups, single writer per key.
class MeasureCache {
public:
  std::shared_ptr<const CircleMeasure> get_or_synthesize(const FourierTarget& target,
                                                         std::size_t grid_t,
                                                         const SolverOptions& opts = {});

private:
  std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const CircleMeasure>> entries_;
};

} // namespace gtdisc
