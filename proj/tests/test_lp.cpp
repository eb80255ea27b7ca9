#include "gtdisc/lp.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gtdisc;

namespace {

// Every cut with x_1 = +1 (global flip symmetry), all y patterns.
CutSet full_cut_pool(std::size_t n) {
  CutSet cuts;
  for (std::uint64_t xb = 0; xb < (std::uint64_t{1} << (n - 1)); ++xb) {
    std::vector<int> x(n, 1);
    for (std::size_t b = 0; b + 1 < n; ++b)
      if ((xb >> b) & 1) x[b + 1] = -1;
    for (std::uint64_t yb = 0; yb < (std::uint64_t{1} << n); ++yb) {
      std::vector<int> y(n, 1);
      for (std::size_t b = 0; b < n; ++b)
        if ((yb >> b) & 1) y[b] = -1;
      cuts.add(x, y, 0);
    }
  }
  return cuts;
}

} // namespace

TEST_CASE("CutSet deduplicates up to the global flip") {
  CutSet cuts;
  CHECK(cuts.add({1, -1}, {1, 1}, 0));
  CHECK_FALSE(cuts.add({1, -1}, {1, 1}, 1));
  CHECK_FALSE(cuts.add({-1, 1}, {-1, -1}, 2)); // same cut, flipped
  CHECK(cuts.add({1, -1}, {-1, -1}, 3));
  CHECK(cuts.size() == 2);
}

TEST_CASE("lp_solve n=1: every distribution has discrepancy 1") {
  CutSet cuts;
  cuts.add({1}, {1}, 0);
  LpSolution sol = lp_solve(cuts, gt_hankel(1));
  CHECK(sol.t == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.mu.at(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp_solve n=2: full pool gives the minimax value 1/2") {
  LpSolution sol = lp_solve(full_cut_pool(2), gt_hankel(2));
  CHECK(sol.t == doctest::Approx(0.5).epsilon(1e-8));
  sol.mu.validate();
  // the optimum is tight at the returned mu
  CHECK(disc_exact_boolean(gt_hankel(2), sol.mu).value == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("lp_solve respects the cut pool (partial pool underestimates)") {
  CutSet cuts;
  cuts.add({1, 1}, {1, 1}, 0);
  LpSolution sol = lp_solve(cuts, gt_hankel(2));
  CHECK(sol.t <= 0.5 + 1e-9);
  // adding a redundant duplicate changes nothing
  LpSolution again = lp_solve(cuts, gt_hankel(2));
  CHECK(again.t == doctest::Approx(sol.t).epsilon(1e-12));
}

TEST_CASE("optimal_distribution closed forms") {
  MinimaxResult r1 = optimal_distribution(gt_hankel(1), 1e-9);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-9));

  MinimaxResult r2 = optimal_distribution(gt_hankel(2), 1e-9);
  CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r2.gap <= 1e-6);
  r2.mu_opt.validate();

  CHECK_THROWS_AS(optimal_distribution(gt_hankel(15), 1e-6), std::invalid_argument);
}

TEST_CASE("column generation matches full enumeration for n = 3..6") {
  for (std::size_t n = 3; n <= 6; ++n) {
    SignMatrix g = gt_hankel(n);
    double full = lp_solve(full_cut_pool(n), g).t;
    MinimaxResult gen = optimal_distribution(g, 1e-7);
    CHECK(gen.value == doctest::Approx(full).epsilon(1e-5));
    CHECK(gen.cuts.size() < full_cut_pool(n).size()); // far fewer cuts needed
    // the returned mu really achieves the value
    CHECK(disc_exact_boolean(g, gen.mu_opt).value == doctest::Approx(full).epsilon(1e-5));
  }
}

TEST_CASE("minimax value never exceeds the spectral chain") {
  for (std::size_t n = 2; n <= 8; ++n) {
    MinimaxResult r = optimal_distribution(gt_hankel(n), 1e-6);
    CHECK(r.value <= spectral_upper_bound(n).tight + 1e-6);
    CHECK(r.value <= disc_exact_boolean(gt_hankel(n), mu_star(n)).value + 1e-6);
  }
}

TEST_CASE("minimax value is orientation invariant") {
  for (std::size_t n : {2, 4, 6, 8}) {
    double hankel = optimal_distribution(gt_hankel(n), 1e-7).value;
    double toeplitz = optimal_distribution(gt_toeplitz(n), 1e-7).value;
    CHECK(hankel == doctest::Approx(toeplitz).epsilon(1e-5));
  }
}

TEST_CASE("sandwich_table shape and invariants") {
  SandwichOptions opts;
  opts.lp_max_n = 4;
  opts.measure.max_iters = 40000;
  opts.measure.relax = 1.9;
  MeasureCache cache;
  std::vector<SandwichRow> rows = sandwich_table({2, 4, 8}, opts, &cache);
  REQUIRE(rows.size() == 3);
  for (const SandwichRow& r : rows) {
    CHECK(r.lower > 0.0);
    CHECK(r.lower <= r.upper_tight + 1e-9);
    CHECK(r.upper_tight <= r.upper_loose + 1e-12);
    CHECK(r.measure_converged);
    CHECK(r.lower == doctest::Approx(0.5 / r.measure_norm).epsilon(1e-12));
    if (r.n <= 4) {
      CHECK_FALSE(std::isnan(r.lp_value));
      CHECK(r.lp_value <= r.upper_tight + 1e-6);
      CHECK(r.lp_value >= r.lower - 1e-6);
    } else {
      CHECK(std::isnan(r.lp_value));
    }
    CHECK(r.reference == doctest::Approx(std::numbers::pi / (2.0 * std::log(r.n))));
  }
}
