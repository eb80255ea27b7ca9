#include "gtdisc/certificates.hpp"

#include "gtdisc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace gtdisc {

namespace {

constexpr double kPi = std::numbers::pi;

double atom_norm(const std::vector<cplx>& v) {
  double sum = 0.0, comp = 0.0;
  for (const cplx& a : v) {
    double x = std::abs(a) - comp;
    double t = sum + x;
    comp = (t - sum) - x;
    sum = t;
  }
  return sum / static_cast<double>(v.size());
}

// Exact projection onto the affine band constraints. The grid characters are
// orthonormal under the (1/T)-weighted inner product, so
//   v <- v + sum_{|l| <= n} (target(l) - vhat(l)) e^{-2 pi i l t_s}.
class BandProjector {
public:
  BandProjector(const FourierTarget& target, std::size_t grid_t)
      : target_(target), t_(grid_t), plan_(grid_t), hat_(grid_t), corr_(grid_t), out_(grid_t) {}

  // vhat(l) = (1/T) sum_s v_s e^{2 pi i l s/T} = (1/T) * backward-DFT(v)[l mod T]
  void project(std::vector<cplx>& v) {
    plan_.backward(v.data(), hat_.data());
    std::fill(corr_.begin(), corr_.end(), cplx{0.0, 0.0});
    const long n = static_cast<long>(target_.degree);
    const long t = static_cast<long>(t_);
    const double inv_t = 1.0 / static_cast<double>(t_);
    for (long l = -n; l <= n; ++l) {
      std::size_t slot = static_cast<std::size_t>(((l % t) + t) % t);
      corr_[slot] = target_(l) - hat_[slot] * inv_t;
    }
    // sum_l corr(l) e^{-2 pi i l s/T} = forward-DFT(corr)[s]
    plan_.forward(corr_.data(), out_.data());
    for (std::size_t s = 0; s < t_; ++s) v[s] += out_[s];
  }

private:
  FourierTarget target_;
  std::size_t t_;
  DftPlan plan_;
  std::vector<cplx> hat_;
  std::vector<cplx> corr_;
  std::vector<cplx> out_;
};

} // namespace

std::string to_string(TargetSide s) {
  return s == TargetSide::NonnegativeHalf ? "NonnegativeHalf" : "NegativeHalf";
}

TargetSide side_from_string(const std::string& s) {
  if (s == "NonnegativeHalf") return TargetSide::NonnegativeHalf;
  if (s == "NegativeHalf") return TargetSide::NegativeHalf;
  throw std::invalid_argument("unknown target side: " + s);
}

CircleMeasure synthesize_measure(const FourierTarget& target, std::size_t grid_t,
                                 const SolverOptions& opts) {
  const std::size_t n = target.degree;
  if (grid_t < 4 * n + 1)
    throw std::invalid_argument("synthesize_measure: grid must be >= 4n+1");
  if (opts.step <= 0.0 || opts.relax <= 0.0 || opts.relax >= 2.0)
    throw std::invalid_argument("synthesize_measure: bad solver options");
  const std::size_t max_iters = opts.max_iters == 0 ? 50 * grid_t : opts.max_iters;
  const double tau = opts.step;

  BandProjector proj(target, grid_t);

  // Warm start: the truncated analytic half-line kernel (1/2)(1 + i cot(pi t))
  // already has the right shape; the projection makes it feasible. The
  // reflected side starts from its conjugate with the DC mass removed.
  std::vector<cplx> z(grid_t, cplx{0.0, 0.0});
  for (std::size_t s = 1; s < grid_t; ++s) {
    double t = static_cast<double>(s) / static_cast<double>(grid_t);
    cplx v{0.5, 0.5 / std::tan(kPi * t)};
    z[s] = target.side == TargetSide::NonnegativeHalf ? v : std::conj(v) - 1.0;
  }
  proj.project(z);

  std::vector<cplx> x(grid_t), y(grid_t), best = z;
  double best_norm = atom_norm(z);
  std::size_t last_improve = 0;
  bool converged = false;

  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t s = 0; s < grid_t; ++s) {
      double a = std::abs(z[s]);
      x[s] = a > tau ? z[s] * (1.0 - tau / a) : cplx{0.0, 0.0};
    }
    for (std::size_t s = 0; s < grid_t; ++s) y[s] = 2.0 * x[s] - z[s];
    proj.project(y); // y is the feasible iterate
    for (std::size_t s = 0; s < grid_t; ++s) z[s] += opts.relax * (y[s] - x[s]);

    double nrm = atom_norm(y);
    if (nrm < best_norm) {
      if (nrm < best_norm * (1.0 - opts.tol)) last_improve = it;
      best_norm = nrm;
      best = y;
    }
    if (it - last_improve > 100) {
      converged = true;
      break;
    }
  }

  proj.project(best); // a final exact projection enforces feasibility
  CircleMeasure m;
  m.grid = grid_t;
  m.degree = n;
  m.side = target.side;
  m.atoms = std::move(best);
  m.norm = atom_norm(m.atoms);
  m.converged = converged;
  m.solver = opts;
  return m;
}

cplx measure_fourier(const CircleMeasure& measure, long l) {
  const long t = static_cast<long>(measure.grid);
  if (2 * std::abs(l) > t)
    throw std::invalid_argument("measure_fourier: |l| exceeds T/2 (aliased)");
  // Direct evaluation; callers needing the whole band should batch via a DFT.
  cplx sum{0.0, 0.0}, comp{0.0, 0.0};
  const double w = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(t);
  for (std::size_t s = 0; s < measure.grid; ++s) {
    cplx term = measure.atoms[s] * std::polar(1.0, w * static_cast<double>(s));
    cplx a = term - comp;
    cplx u = sum + a;
    comp = (u - sum) - a;
    sum = u;
  }
  return sum / static_cast<double>(measure.grid);
}

double measure_norm(const CircleMeasure& measure) { return atom_norm(measure.atoms); }

double fourier_residual(const CircleMeasure& measure) {
  const std::size_t t = measure.grid;
  DftPlan plan(t);
  std::vector<cplx> hat(t);
  plan.backward(measure.atoms.data(), hat.data());
  FourierTarget target{measure.degree, measure.side};
  const long n = static_cast<long>(measure.degree);
  const long tl = static_cast<long>(t);
  double worst = 0.0;
  for (long l = -n; l <= n; ++l) {
    std::size_t slot = static_cast<std::size_t>(((l % tl) + tl) % tl);
    worst = std::max(worst, std::abs(hat[slot] / static_cast<double>(t) - target(l)));
  }
  return worst;
}

double certified_lower_bound(const CircleMeasure& measure) {
  return 0.5 / measure.norm;
}

LowerBoundCertificate verify_certificate(const EntryDistribution& mu, const CircleMeasure& measure,
                                         std::size_t scan_grid) {
  const std::size_t n = mu.n;
  if (n == 0) throw std::invalid_argument("verify_certificate: empty distribution");
  if (measure.degree + 1 < n)
    throw std::invalid_argument("verify_certificate: measure degree must be >= n-1");

  double pr_ge = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= j; ++k) pr_ge += mu.at(j, k);

  TargetSide want = pr_ge >= 0.5 ? TargetSide::NonnegativeHalf : TargetSide::NegativeHalf;
  CircleMeasure reflected;
  const CircleMeasure* use = &measure;
  if (measure.side != want) {
    reflected = synthesize_measure(FourierTarget{measure.degree, want}, measure.grid,
                                   measure.solver);
    use = &reflected;
  }

  // Chain identity: with Toeplitz signs and the matching half-line target the
  // weighted sum of nuhat(j-k) collapses to max(P, 1-P) up to the residual.
  std::vector<cplx> hat(2 * n - 1);
  for (long d = -(static_cast<long>(n) - 1); d <= static_cast<long>(n) - 1; ++d)
    hat[static_cast<std::size_t>(d + static_cast<long>(n) - 1)] = measure_fourier(*use, d);
  cplx chain{0.0, 0.0};
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= n; ++k) {
      long d = static_cast<long>(j) - static_cast<long>(k);
      double sgn = d >= 0 ? 1.0 : -1.0;
      chain += sgn * mu.at(j, k) * hat[static_cast<std::size_t>(d + static_cast<long>(n) - 1)];
    }
  double chain_abs = std::abs(chain);
  if (chain_abs < 0.5 - 1e-10)
    throw CertificateError("verify_certificate: chain identity below 1/2", pr_ge, use->norm,
                           chain_abs);

  // Scan on a refinement of the measure grid so the averaging inequality
  // |sum_s (v_s/T) Phi(t_s)| <= ||nu|| max |Phi| applies verbatim.
  std::size_t base = use->grid;
  std::size_t want_grid = std::max<std::size_t>(std::max(scan_grid, 2 * n), base);
  std::size_t factor = (want_grid + base - 1) / base;
  CharacterScan scan = character_witness_scan(mu, factor * base);

  double threshold = (0.5 - 1e-6) / use->norm;
  if (scan.value < threshold)
    throw CertificateError("verify_certificate: character scan below threshold", pr_ge, use->norm,
                           scan.value);

  LowerBoundCertificate cert;
  cert.claimed_disc_lower = certified_lower_bound(*use);
  cert.pr_ge = pr_ge;
  cert.chain_sum = chain_abs;
  cert.scan_max = scan.value;
  cert.t_star = scan.t_star;
  cert.side = use->side;
  cert.measure_norm = use->norm;
  cert.witness = scan.witness;
  cert.mu_id = mu.meta.kind;
  return cert;
}

std::shared_ptr<const CircleMeasure> MeasureCache::get_or_synthesize(const FourierTarget& target,
                                                                     std::size_t grid_t,
                                                                     const SolverOptions& opts) {
  std::ostringstream key;
  key << target.degree << '|' << to_string(target.side) << '|' << grid_t << '|' << opts.max_iters
      << '|' << opts.step << '|' << opts.tol << '|' << opts.relax;
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key.str());
    if (it != entries_.end()) return it->second;
  }
  auto measure = std::make_shared<const CircleMeasure>(synthesize_measure(target, grid_t, opts));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key.str(), measure);
  return it->second;
}

} // namespace gtdisc
