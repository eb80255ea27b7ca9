#include "gtdisc/certificates.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gtdisc;

TEST_CASE("degree-0 target: the constant measure is optimal") {
  CircleMeasure m = synthesize_measure({0, TargetSide::NonnegativeHalf}, 8);
  CHECK(m.converged);
  CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(measure_fourier(m, 0) - cplx{1.0, 0.0}) < 1e-10);
  CHECK(fourier_residual(m) < 1e-8);
}

TEST_CASE("synthesize_measure guards") {
  CHECK_THROWS_AS(synthesize_measure({4, TargetSide::NonnegativeHalf}, 16),
                  std::invalid_argument); // T < 4n+1
  SolverOptions bad;
  bad.relax = 2.5;
  CHECK_THROWS_AS(synthesize_measure({1, TargetSide::NonnegativeHalf}, 8, bad),
                  std::invalid_argument);
}

TEST_CASE("feasibility and the logarithmic norm bound") {
  SolverOptions opts;
  opts.max_iters = 40000;
  opts.relax = 1.9;
  for (std::size_t n : {2, 4, 8, 16, 32, 64}) {
    CircleMeasure m = synthesize_measure({n, TargetSide::NonnegativeHalf}, 8 * n, opts);
    CHECK(m.converged);
    CHECK(fourier_residual(m) <= 1e-8);
    CHECK(m.norm <= std::log(static_cast<double>(n)) / std::numbers::pi + 2.0);
    CHECK(m.norm >= 1.0 - 1e-10); // nuhat(0) = 1 forces norm >= 1
    CHECK(measure_norm(m) == doctest::Approx(m.norm).epsilon(1e-14));
  }
}

TEST_CASE("n=1, T=4096 minimal norm regression") {
  SolverOptions opts;
  opts.max_iters = 200000;
  opts.relax = 1.9;
  opts.tol = 1e-12;
  CircleMeasure m = synthesize_measure({1, TargetSide::NonnegativeHalf}, 4096, opts);
  CHECK(fourier_residual(m) <= 1e-8);
  CHECK(m.norm == doctest::Approx(1.1547918).epsilon(1e-4));
}

TEST_CASE("measure_fourier alias guard") {
  CircleMeasure m = synthesize_measure({2, TargetSide::NonnegativeHalf}, 16);
  CHECK_NOTHROW(measure_fourier(m, 8));
  CHECK_THROWS_AS(measure_fourier(m, 9), std::invalid_argument);
  CHECK_THROWS_AS(measure_fourier(m, -9), std::invalid_argument);
}

TEST_CASE("reflected target synthesis") {
  // The two targets differ by the single point l = 0 (delta of norm 1), so
  // their minimal norms agree within 1 but are not equal at finite n.
  for (std::size_t n : {2, 8, 32}) {
    SolverOptions opts;
    opts.max_iters = 40000;
    opts.relax = 1.9;
    CircleMeasure pos = synthesize_measure({n, TargetSide::NonnegativeHalf}, 8 * n, opts);
    CircleMeasure neg = synthesize_measure({n, TargetSide::NegativeHalf}, 8 * n, opts);
    CHECK(fourier_residual(neg) <= 1e-8);
    CHECK(std::abs(pos.norm - neg.norm) <= 1.0);
    // the negative-side measure interpolates the reflected indicator
    CHECK(std::abs(measure_fourier(neg, -1) - cplx{1.0, 0.0}) < 1e-8);
    CHECK(std::abs(measure_fourier(neg, 0)) < 1e-8);
  }
}

TEST_CASE("minimal norm is nondecreasing in the degree") {
  SolverOptions opts;
  opts.max_iters = 60000;
  opts.relax = 1.9;
  double prev = 0.0;
  for (std::size_t n : {1, 2, 4, 8, 16}) {
    CircleMeasure m = synthesize_measure({n, TargetSide::NonnegativeHalf}, 512, opts);
    CHECK(m.norm >= prev - 1e-4);
    prev = m.norm;
  }
}

TEST_CASE("certified_lower_bound") {
  CircleMeasure m = synthesize_measure({4, TargetSide::NonnegativeHalf}, 32);
  CHECK(certified_lower_bound(m) == doctest::Approx(0.5 / m.norm).epsilon(1e-14));
}

TEST_CASE("verify_certificate accepts standard distributions") {
  SolverOptions opts;
  opts.max_iters = 40000;
  opts.relax = 1.9;

  for (std::size_t n : {4, 8}) {
    CircleMeasure m = synthesize_measure({n, TargetSide::NonnegativeHalf}, 8 * n, opts);

    SUBCASE("uniform") {
      LowerBoundCertificate cert = verify_certificate(uniform_distribution(n), m, 4 * 8 * n);
      CHECK(cert.claimed_disc_lower == doctest::Approx(0.5 / m.norm).epsilon(1e-12));
      CHECK(cert.chain_sum >= 0.5 - 1e-10);
      CHECK(cert.scan_max >= (0.5 - 1e-6) / m.norm);
      // witness actually achieves the scan value against gt_toeplitz
      double direct =
          std::abs(eval_bilinear(gt_toeplitz(n), uniform_distribution(n), cert.witness.x,
                                 cert.witness.y));
      CHECK(direct == doctest::Approx(cert.scan_max).epsilon(1e-10));
    }

    SUBCASE("bridged mu_star and random") {
      for (int which = 0; which < 3; ++which) {
        EntryDistribution mu = which == 0 ? hankel_to_toeplitz(mu_star(n))
                                          : random_distribution(n, 7 + which);
        LowerBoundCertificate cert = verify_certificate(mu, m, 4 * 8 * n);
        CHECK(cert.scan_max * cert.measure_norm >= 0.5 - 1e-6);
        CHECK(cert.pr_ge >= 0.0);
        CHECK(cert.pr_ge <= 1.0);
      }
    }
  }
}

TEST_CASE("verify_certificate picks the reflected side when Pr[j >= k] < 1/2") {
  const std::size_t n = 6;
  // all mass strictly above the diagonal: Pr[j >= k] = 0
  EntryDistribution mu{n, std::vector<double>(n * n, 0.0),
                       {"custom", std::nullopt, std::nullopt}};
  double cells = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = j + 1; k <= n; ++k) cells += 1.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = j + 1; k <= n; ++k) mu.weights[(j - 1) * n + (k - 1)] = 1.0 / cells;

  SolverOptions opts;
  opts.max_iters = 40000;
  opts.relax = 1.9;
  CircleMeasure m = synthesize_measure({n, TargetSide::NonnegativeHalf}, 8 * n, opts);
  LowerBoundCertificate cert = verify_certificate(mu, m, 32 * n);
  CHECK(cert.side == TargetSide::NegativeHalf);
  CHECK(cert.pr_ge == doctest::Approx(0.0));
  CHECK(cert.chain_sum >= 0.5 - 1e-10);
}

TEST_CASE("verify_certificate degree guard") {
  CircleMeasure small = synthesize_measure({2, TargetSide::NonnegativeHalf}, 16);
  CHECK_THROWS_AS(verify_certificate(uniform_distribution(8), small), std::invalid_argument);
}

TEST_CASE("verify_certificate rejects a corrupted measure") {
  SolverOptions opts;
  opts.max_iters = 20000;
  opts.relax = 1.9;
  CircleMeasure m = synthesize_measure({4, TargetSide::NonnegativeHalf}, 32, opts);
  for (auto& a : m.atoms) a *= 0.05; // breaks the chain identity
  CHECK_THROWS_AS(verify_certificate(uniform_distribution(4), m), CertificateError);
}

TEST_CASE("certificate soundness: heuristic maximization confirms the bound") {
  const std::size_t n = 16;
  SolverOptions opts;
  opts.max_iters = 60000;
  opts.relax = 1.9;
  CircleMeasure m = synthesize_measure({n, TargetSide::NonnegativeHalf}, 8 * n, opts);
  EntryDistribution mu = hankel_to_toeplitz(mu_star(n));
  LowerBoundCertificate cert = verify_certificate(mu, m, 16 * n);

  WitnessPair refined = disc_alternating_from(gt_toeplitz(n), mu, cert.witness.x, 500);
  CHECK(refined.value >= cert.claimed_disc_lower - 1e-12);
  CHECK(refined.value >= cert.scan_max - 1e-12);
  // and the upper chain still dominates
  CHECK(refined.value <= spectral_upper_bound(n).tight + 1e-9);
}

TEST_CASE("MeasureCache returns the same object and distinguishes keys") {
  MeasureCache cache;
  FourierTarget t{3, TargetSide::NonnegativeHalf};
  auto a = cache.get_or_synthesize(t, 32);
  auto b = cache.get_or_synthesize(t, 32);
  CHECK(a.get() == b.get());

  auto c = cache.get_or_synthesize(t, 64);
  CHECK(a.get() != c.get());
  auto d = cache.get_or_synthesize({3, TargetSide::NegativeHalf}, 32);
  CHECK(a.get() != d.get());

  SolverOptions opts;
  opts.relax = 1.5;
  auto e = cache.get_or_synthesize(t, 32, opts);
  CHECK(a.get() != e.get());
}
