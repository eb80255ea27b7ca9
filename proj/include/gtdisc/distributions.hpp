#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace gtdisc {

struct DistributionMeta {
  std::string kind; // "mu_star" | "eta" | "uniform" | "random" | "custom"
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> m;
};

// Probability distribution on [n] x [n]. Weights are row-major, 1-based at().
struct EntryDistribution {
  std::size_t n = 0;
  std::vector<double> weights;
  DistributionMeta meta{"custom", std::nullopt, std::nullopt};

  double at(std::size_t j, std::size_t k) const { return weights[(j - 1) * n + (k - 1)]; }

  // Checks nonnegativity and unit sum (1e-12 absolute); throws otherwise.
  void validate() const;
};

// Bit-sampling distribution parameters: n = 2^m, [n] identified with {0,1}^m
// via the binary representation of j-1, first coordinate most significant.
struct EtaSpec {
  unsigned m = 1;
  std::size_t n() const { return std::size_t{1} << m; }
};

// weights[j][k] = |hilbert(n)[j][k]| / ||hilbert(n)||_1.
EntryDistribution mu_star(std::size_t n);

// Dense pmf of eta; for j != k with most significant differing coordinate i
// (1-based from the MSB), weight = 2^-m * (1/m) * 2^-(m-i); diagonal 0.
// Restricted to m <= 12 (the table has 4^m cells).
EntryDistribution eta_pmf(const EtaSpec& spec);

// One draw of the sampling process: j uniform, i uniform in [m], k copies j
// above coordinate i, flips coordinate i, uniform below. Returns 1-based (j,k).
std::pair<std::size_t, std::size_t> eta_sample(const EtaSpec& spec, std::mt19937_64& rng);
std::pair<std::size_t, std::size_t> eta_sample(const EtaSpec& spec, std::uint64_t seed);

EntryDistribution uniform_distribution(std::size_t n);

// Symmetric Dirichlet(1) over the n^2 cells: normalized independent unit-rate
// exponentials, bit-reproducible per seed.
EntryDistribution random_distribution(std::size_t n, std::uint64_t seed);

// Exact bilinear value of the explicit witness (x = indicator of Hamming
// weight >= ceil(m/2 + sqrt(m)), y = all-ones) under eta against gt_toeplitz:
//   sum_{w >= w*} C(m,w) 2^-m (2w/m - 1),
// evaluated by weight classes in O(m) log-domain arithmetic.
double eta_witness_value(const EtaSpec& spec);

// Threshold w* used by eta_witness_value.
std::size_t eta_weight_threshold(const EtaSpec& spec);

} // namespace gtdisc
