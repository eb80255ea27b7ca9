#pragma once

#include "gtdisc/certificates.hpp"
#include "gtdisc/discrepancy.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace gtdisc {

// Sign-pattern pair; CutSet deduplicates up to the global flip (x,y)~(-x,-y).
struct Cut {
  std::vector<int> x;
  std::vector<int> y;
  std::size_t iteration = 0;
};

class CutSet {
public:
  // Returns false (and does not insert) when an equivalent cut is present.
  bool add(std::vector<int> x, std::vector<int> y, std::size_t iteration);
  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

private:
  std::vector<Cut> cuts_;
};

class LpFailure : public std::runtime_error {
public:
  LpFailure(const std::string& msg, std::vector<std::size_t> basis)
      : std::runtime_error(msg), basis(std::move(basis)) {}
  std::vector<std::size_t> basis;
};

struct LpSolution {
  EntryDistribution mu;
  double t = 0.0;
};

// min t subject to mu >= 0, sum mu = 1, +-<G o (x y^T), mu> <= t per cut.
// Dense two-phase simplex with Bland's anti-cycling rule.
LpSolution lp_solve(const CutSet& cuts, const SignMatrix& g, double eps_lp = 1e-9);

struct MinimaxResult {
  EntryDistribution mu_opt;
  double value = 0.0; // separation-oracle value at termination
  double gap = 0.0;   // oracle value minus LP objective
  std::size_t iterations = 0;
  CutSet cuts;
};

// Column generation for the boolean minimax disc(G): LP over the current cut
// pool, disc_exact_boolean as separation oracle, stop when the oracle value
// is within eps of the LP objective. Guarded to n <= 14.
MinimaxResult optimal_distribution(const SignMatrix& g, double eps, unsigned threads = 0);

struct SandwichRow {
  std::size_t n = 0;
  double lower = 0.0;       // certified via the synthesized measure
  double upper_loose = 0.0; // pi n / ||H||_1
  double upper_tight = 0.0; // n sigma_max / ||H||_1
  double lp_value = std::numeric_limits<double>::quiet_NaN(); // NaN when skipped
  double reference = 0.0;   // pi / (2 ln n)
  double measure_norm = 0.0;
  bool measure_converged = false;
};

struct SandwichOptions {
  std::size_t lp_max_n = 12;          // exact minimax only up to here
  double lp_eps = 1e-6;
  SpectralOptions spectral{};
  SolverOptions measure{};            // measure.max_iters = 0 -> 50 T
  std::size_t measure_grid_factor = 8; // T = factor * n + 1
  unsigned threads = 0;
};

std::vector<SandwichRow> sandwich_table(const std::vector<std::size_t>& sizes,
                                        const SandwichOptions& opts = {},
                                        MeasureCache* cache = nullptr);

} // namespace gtdisc
