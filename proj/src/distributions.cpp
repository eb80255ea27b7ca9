#include "gtdisc/distributions.hpp"

#include "gtdisc/matrices.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace gtdisc {

void EntryDistribution::validate() const {
  if (n == 0 || weights.size() != n * n)
    throw std::invalid_argument("EntryDistribution: bad dimensions");
  double sum = 0.0, comp = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("EntryDistribution: negative weight");
    double a = w - comp;
    double t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("EntryDistribution: weights sum to " + std::to_string(sum));
}

EntryDistribution mu_star(std::size_t n) {
  HilbertMatrix h = hilbert(n);
  double total = l1_norm(h);
  EntryDistribution mu{n, std::vector<double>(n * n), {"mu_star", std::nullopt, std::nullopt}};
  for (std::size_t i = 0; i < n * n; ++i) mu.weights[i] = std::abs(h.entries[i]) / total;
  return mu;
}

EntryDistribution eta_pmf(const EtaSpec& spec) {
  if (spec.m == 0) throw std::invalid_argument("eta_pmf: m must be positive");
  if (spec.m > 12) throw std::invalid_argument("eta_pmf: dense table limited to m <= 12");
  const unsigned m = spec.m;
  const std::size_t n = spec.n();
  EntryDistribution mu{n, std::vector<double>(n * n, 0.0), {"eta", std::nullopt, m}};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      std::size_t diff = j ^ k;
      // Highest set bit position p (0-based from LSB) <-> coordinate i = m - p.
      unsigned p = static_cast<unsigned>(std::bit_width(diff)) - 1;
      mu.weights[j * n + k] = std::ldexp(1.0 / m, -static_cast<int>(m + p));
    }
  return mu;
}

std::pair<std::size_t, std::size_t> eta_sample(const EtaSpec& spec, std::mt19937_64& rng) {
  if (spec.m == 0) throw std::invalid_argument("eta_sample: m must be positive");
  const unsigned m = spec.m;
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t j = rng() & mask;
  unsigned i = 1 + static_cast<unsigned>(rng() % m); // coordinate, 1-based from MSB
  unsigned p = m - i;                                // bit position from LSB
  std::uint64_t low = (p == 0) ? 0 : ((std::uint64_t{1} << p) - 1);
  std::uint64_t k = (j & ~low & ~(std::uint64_t{1} << p)) // coordinates above i copied
                    | ((~j) & (std::uint64_t{1} << p))    // coordinate i flipped
                    | (rng() & low);                      // coordinates below i uniform
  return {static_cast<std::size_t>(j) + 1, static_cast<std::size_t>(k) + 1};
}

std::pair<std::size_t, std::size_t> eta_sample(const EtaSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return eta_sample(spec, rng);
}

EntryDistribution uniform_distribution(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_distribution: n must be positive");
  EntryDistribution mu{n, std::vector<double>(n * n, 1.0 / static_cast<double>(n * n)),
                       {"uniform", std::nullopt, std::nullopt}};
  return mu;
}

EntryDistribution random_distribution(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_distribution: n must be positive");
  EntryDistribution mu{n, std::vector<double>(n * n), {"random", seed, std::nullopt}};
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  for (auto& w : mu.weights) {
    double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; // u in (0,1)
    w = -std::log(u);
    sum += w;
  }
  for (auto& w : mu.weights) w /= sum;
  return mu;
}

std::size_t eta_weight_threshold(const EtaSpec& spec) {
  if (spec.m == 0) throw std::invalid_argument("eta_weight_threshold: m must be positive");
  double thr = static_cast<double>(spec.m) / 2.0 + std::sqrt(static_cast<double>(spec.m));
  return static_cast<std::size_t>(std::ceil(thr));
}

double eta_witness_value(const EtaSpec& spec) {
  const unsigned m = spec.m;
  const std::size_t wstar = eta_weight_threshold(spec);
  const double ln2 = std::log(2.0);
  double sum = 0.0, comp = 0.0;
  for (std::size_t w = wstar; w <= m; ++w) {
    double logp = std::lgamma(m + 1.0) - std::lgamma(w + 1.0) - std::lgamma(m - w + 1.0) -
                  static_cast<double>(m) * ln2;
    double term = std::exp(logp) * (2.0 * static_cast<double>(w) / m - 1.0);
    double a = term - comp;
    double t = sum + a;
    comp = (t - sum) - a;
    sum = t;
  }
  return sum;
}

} // namespace gtdisc
