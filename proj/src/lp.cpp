#include "gtdisc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gtdisc {

namespace {

std::pair<std::vector<int>, std::vector<int>> canonical_cut(std::vector<int> x,
                                                            std::vector<int> y) {
  if (!x.empty() && x[0] < 0) {
    for (auto& v : x) v = -v;
    for (auto& v : y) v = -v;
  }
  return {std::move(x), std::move(y)};
}

// Dense tableau simplex: min c.z, A z = b, z >= 0, b >= 0. Dantzig pricing
// with a switch to Bland's anti-cycling rule on degenerate stalls, periodic
// refactorization from the pristine constraint data to control drift.
// Supports appending constraints after a solve (each with a fresh slack
// column) and restoring feasibility with dual simplex steps, which is what
// makes warm-started column generation cheap.
class Simplex {
public:
  Simplex(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), stride_(cols + 1), a_(rows * (cols + 1), 0.0),
        basis_(rows, SIZE_MAX), in_basis_(cols, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * stride_ + c]; }
  double& rhs(std::size_t r) { return a_[r * stride_ + n_]; }
  void set_basis(std::size_t row, std::size_t var) {
    basis_[row] = var;
    in_basis_[var] = 1;
  }
  const std::vector<std::size_t>& basis() const { return basis_; }

  // Snapshot the original constraint data; refactor() re-derives the tableau
  // from it, which is what keeps long pivot sequences from drifting.
  void freeze() { pristine_ = a_; }

  // Rebuilds the canonical tableau for the current basis from the pristine
  // data by fresh Gaussian elimination with row partial pivoting. Unit slack
  // columns are processed first so they cause no fill-in.
  void refactor() {
    std::vector<std::size_t> vars = basis_;
    std::sort(vars.begin(), vars.end(), std::greater<>()); // slacks/artificial first
    a_ = pristine_;
    std::vector<char> done(m_, 0);
    std::vector<std::size_t> new_basis(m_, SIZE_MAX);
    for (std::size_t v : vars) {
      std::size_t best = SIZE_MAX;
      double bp = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (done[i]) continue;
        double p = std::abs(at(i, v));
        if (p > bp) {
          bp = p;
          best = i;
        }
      }
      if (best == SIZE_MAX || bp < 1e-10)
        throw LpFailure("simplex: singular basis in refactorization (var " + std::to_string(v) +
                            ", bp " + std::to_string(bp) + ")",
                        basis_);
      pivot_rows(best, v);
      done[best] = 1;
      new_basis[best] = v;
    }
    basis_ = std::move(new_basis);
    // pivot_rows bookkeeping used stale row assignments above; rebuild it.
    std::fill(in_basis_.begin(), in_basis_.end(), 0);
    for (std::size_t v : basis_) in_basis_[v] = 1;
    pivots_since_refactor_ = 0;
  }

  // Appends one constraint row (dense coefficients over the current columns,
  // zero-padded) together with its fresh slack column, expressed in the
  // current basis so the tableau stays canonical. The slack enters the basis;
  // its value is the new row's rhs, which may be negative (an appended cut is
  // violated at the current point) -- dual_restore() repairs that.
  void add_row(const std::vector<double>& row, double rhs_v) {
    if (n_ + 2 > stride_) regrow(n_ + 2 + 256);
    // Shift the rhs one slot right to open the new slack column.
    for (std::size_t r = 0; r < m_; ++r) {
      a_[r * stride_ + n_ + 1] = a_[r * stride_ + n_];
      a_[r * stride_ + n_] = 0.0;
      pristine_[r * stride_ + n_ + 1] = pristine_[r * stride_ + n_];
      pristine_[r * stride_ + n_] = 0.0;
    }
    const std::size_t slack = n_;
    ++n_;
    in_basis_.resize(n_, 0);

    pristine_.resize((m_ + 1) * stride_, 0.0);
    double* pr = pristine_.data() + m_ * stride_;
    std::fill(pr, pr + stride_, 0.0);
    std::copy(row.begin(), row.end(), pr);
    pr[slack] = 1.0;
    pr[n_] = rhs_v;

    a_.resize((m_ + 1) * stride_, 0.0);
    double* ar = a_.data() + m_ * stride_;
    std::copy(pr, pr + stride_, ar);
    // Eliminate the basic columns so the appended row is canonical.
    for (std::size_t i = 0; i < m_; ++i) {
      double f = ar[basis_[i]];
      if (f == 0.0) continue;
      const double* src = a_.data() + i * stride_;
      for (std::size_t j = 0; j <= n_; ++j) {
        ar[j] -= f * src[j];
        if (std::abs(ar[j]) < 1e-11) ar[j] = 0.0;
      }
      ar[basis_[i]] = 0.0; // exact by construction
    }
    basis_.push_back(slack);
    in_basis_[slack] = 1;
    ++m_;
  }

  // Minimizes the given cost (zero-extended past its length); the `banned`
  // column never enters (SIZE_MAX bans nothing). Returns the objective value.
  double run(const std::vector<double>& cost, std::size_t banned, double eps) {
    std::vector<double> red(n_, 0.0);
    double obj = 0.0;
    auto rebuild = [&] { rebuild_costs(cost, red, obj); };
    rebuild();

    const std::size_t max_pivots = 200 * (m_ + n_) + 20000;
    std::size_t stall = 0;
    bool bland = false;
    for (std::size_t pivots = 0; pivots < max_pivots; ++pivots) {
      if (pivots_since_refactor_ >= kRefactorEvery) {
        refactor();
        rebuild();
      }
      std::size_t enter = SIZE_MAX;
      if (bland) {
        // Bland's rule: lowest-index improving column.
        for (std::size_t j = 0; j < n_; ++j)
          if (j != banned && !in_basis_[j] && red[j] < -eps) {
            enter = j;
            break;
          }
      } else {
        double most = -eps;
        for (std::size_t j = 0; j < n_; ++j)
          if (j != banned && !in_basis_[j] && red[j] < most) {
            most = red[j];
            enter = j;
          }
      }
      if (enter == SIZE_MAX) return obj; // optimal

      std::size_t leave = SIZE_MAX;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double piv = at(i, enter);
        if (piv <= kPivTol) continue;
        double ratio = std::max(rhs(i), 0.0) / piv;
        if (leave == SIZE_MAX || ratio < best_ratio - eps) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio < best_ratio + eps) {
          // Ratio ties: Bland's rule wants the lowest basic index (the
          // anti-cycling certificate); otherwise prefer the largest pivot.
          if (bland ? basis_[i] < basis_[leave] : piv > at(leave, enter)) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave == SIZE_MAX)
        throw LpFailure("simplex: unbounded pivot column", basis_);

      pivot(leave, enter, red, obj);
      if (best_ratio <= eps) {
        if (++stall > 4 * m_ + 50) bland = true; // permanent anti-cycling switch
      } else {
        stall = 0;
      }
    }
    throw LpFailure("simplex: pivot cap exceeded", basis_);
  }

  // Dual simplex: starting from a dual-feasible tableau (red >= 0 for `cost`,
  // e.g. right after run() plus appended rows), pivots negative-rhs rows out
  // until the tableau is primal feasible again, preserving optimality.
  double dual_restore(const std::vector<double>& cost, std::size_t banned, double eps) {
    std::vector<double> red(n_, 0.0);
    double obj = 0.0;
    rebuild_costs(cost, red, obj);

    const std::size_t max_pivots = 50 * m_ + 10000;
    for (std::size_t pivots = 0; pivots < max_pivots; ++pivots) {
      std::size_t row = SIZE_MAX;
      double most = -1e-9;
      for (std::size_t i = 0; i < m_; ++i)
        if (rhs(i) < most) {
          most = rhs(i);
          row = i;
        }
      if (row == SIZE_MAX) return obj; // primal feasible (and still optimal)

      if (pivots_since_refactor_ >= kRefactorEvery) {
        refactor();
        rebuild_costs(cost, red, obj);
        continue;
      }
      std::size_t enter = SIZE_MAX;
      double best = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == banned || in_basis_[j]) continue;
        double piv = at(row, j);
        if (piv >= -kPivTol) continue;
        double ratio = std::max(red[j], 0.0) / -piv;
        if (enter == SIZE_MAX || ratio < best - eps ||
            (ratio < best + eps && piv < at(row, enter))) {
          enter = j;
          best = ratio;
        }
      }
      if (enter == SIZE_MAX)
        throw LpFailure("simplex: dual step found no pivot", basis_);
      pivot(row, enter, red, obj);
    }
    throw LpFailure("simplex: dual pivot cap exceeded", basis_);
  }

  // Pivots variable `var` out of the basis on any usable non-banned column.
  // Valid only when its basic value is ~0 (a degenerate phase-1 leftover);
  // reduced costs are rebuilt by the next run() call.
  bool drive_out(std::size_t var, std::size_t banned, double eps) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] != var) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (j != var && j != banned && !in_basis_[j] && std::abs(at(i, j)) > eps) {
          pivot_rows(i, j);
          return true;
        }
      return false;
    }
    return true; // not basic
  }

  std::vector<double> solution(std::size_t nvars) const {
    std::vector<double> z(nvars, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < nvars) z[basis_[i]] = a_[i * stride_ + n_];
    return z;
  }

private:
  static constexpr std::size_t kRefactorEvery = 128;
  // A pivot element of size p amplifies its row by 1/p; entries that are
  // pure elimination noise are snapped to zero in pivot_rows, and anything
  // surviving below this threshold is still too risky to pivot on.
  static constexpr double kPivTol = 1e-7;

  void rebuild_costs(const std::vector<double>& cost, std::vector<double>& red, double& obj) {
    red.assign(n_, 0.0);
    obj = 0.0;
    for (std::size_t j = 0; j < n_ && j < cost.size(); ++j) red[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      obj += cb * rhs(i);
      for (std::size_t j = 0; j < n_; ++j) red[j] -= cb * at(i, j);
    }
    for (std::size_t i = 0; i < m_; ++i) red[basis_[i]] = 0.0; // exact for basic columns
  }

  // Re-packs both tableaus with spare column capacity.
  void regrow(std::size_t new_stride) {
    std::vector<double> a2(m_ * new_stride, 0.0), p2(m_ * new_stride, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      std::copy(a_.begin() + r * stride_, a_.begin() + r * stride_ + n_ + 1,
                a2.begin() + r * new_stride);
      std::copy(pristine_.begin() + r * stride_, pristine_.begin() + r * stride_ + n_ + 1,
                p2.begin() + r * new_stride);
    }
    a_ = std::move(a2);
    pristine_ = std::move(p2);
    stride_ = new_stride;
  }

  void pivot_rows(std::size_t r, std::size_t c) {
    double piv = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) a_[r * stride_ + j] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, c);
      if (f == 0.0) continue;
      double* dst = a_.data() + i * stride_;
      const double* src = a_.data() + r * stride_;
      for (std::size_t j = 0; j <= n_; ++j) {
        dst[j] -= f * src[j];
        // Elimination noise in a should-be-zero cell becomes a catastrophic
        // pivot candidate later; snap it out.
        if (std::abs(dst[j]) < 1e-11) dst[j] = 0.0;
      }
      dst[c] = 0.0; // exact by construction
    }
    in_basis_[basis_[r]] = 0;
    in_basis_[c] = 1;
    basis_[r] = c;
    ++pivots_since_refactor_;
  }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& red, double& obj) {
    double f = red[c];
    pivot_rows(r, c);
    if (f != 0.0) {
      const double* src = a_.data() + r * stride_;
      for (std::size_t j = 0; j < n_; ++j) red[j] -= f * src[j];
      obj += f * src[n_]; // entering at ratio src[n_] changes the objective by red[c] * ratio
    }
    basis_[r] = c;
  }

  std::size_t m_, n_, stride_;
  std::vector<double> a_;
  std::vector<double> pristine_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::size_t pivots_since_refactor_ = 0;
};

// Tableau for min t s.t. mu >= 0, sum mu = 1, per cut +-<G o (x y^T), mu> <= t.
// Columns: mu (ncells), t, slack per inequality, one artificial (for the
// equality row); warm-start slacks for later cuts are appended past `art`.
struct CutLp {
  std::size_t ncells = 0, t_col = 0, art = 0;
  Simplex sx{0, 0};

  CutLp(const CutSet& cuts, const SignMatrix& g) {
    const std::size_t n = g.n;
    ncells = n * n;
    const std::size_t nk = cuts.size();
    t_col = ncells;
    const std::size_t slack0 = ncells + 1;
    art = slack0 + 2 * nk;
    const std::size_t ncols = art + 1;
    const std::size_t rows = 1 + 2 * nk;

    sx = Simplex(rows, ncols);
    for (std::size_t c = 0; c < ncells; ++c) sx.at(0, c) = 1.0;
    sx.at(0, art) = 1.0;
    sx.rhs(0) = 1.0;
    sx.set_basis(0, art);

    for (std::size_t q = 0; q < nk; ++q) {
      const Cut& cut = cuts.cuts()[q];
      for (int sign = 0; sign < 2; ++sign) {
        std::size_t r = 1 + 2 * q + static_cast<std::size_t>(sign);
        double sgn = sign == 0 ? 1.0 : -1.0;
        for (std::size_t j = 1; j <= n; ++j)
          for (std::size_t k = 1; k <= n; ++k)
            sx.at(r, (j - 1) * n + (k - 1)) =
                sgn * g.at(j, k) * static_cast<double>(cut.x[j - 1] * cut.y[k - 1]);
        sx.at(r, t_col) = -1.0;
        sx.at(r, slack0 + 2 * q + static_cast<std::size_t>(sign)) = 1.0;
        sx.set_basis(r, slack0 + 2 * q + static_cast<std::size_t>(sign));
      }
    }
    sx.freeze();
  }

  void two_phase(double eps_lp) {
    // Phase 1: drive the artificial out of the basis.
    std::vector<double> phase1(art + 1, 0.0);
    phase1[art] = 1.0;
    double infeas = sx.run(phase1, SIZE_MAX, eps_lp);
    if (infeas > 1e-7) throw LpFailure("lp_solve: phase 1 infeasible", sx.basis());
    // A degenerate artificial left in the basis could re-grow during phase 2.
    if (!sx.drive_out(art, art, eps_lp))
      throw LpFailure("lp_solve: cannot drive the artificial out", sx.basis());
    sx.run(phase2_cost(), art, eps_lp);
  }

  // Appends the two inequality rows of a new cut to the solved tableau and
  // re-optimizes with dual simplex steps plus a primal cleanup pass.
  void add_cut(const Cut& cut, const SignMatrix& g, double eps_lp) {
    const std::size_t n = g.n;
    for (int sign = 0; sign < 2; ++sign) {
      std::vector<double> row(t_col + 1, 0.0);
      double sgn = sign == 0 ? 1.0 : -1.0;
      for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = 1; k <= n; ++k)
          row[(j - 1) * n + (k - 1)] =
              sgn * g.at(j, k) * static_cast<double>(cut.x[j - 1] * cut.y[k - 1]);
      row[t_col] = -1.0;
      sx.add_row(row, 0.0);
    }
    sx.dual_restore(phase2_cost(), art, eps_lp);
    sx.run(phase2_cost(), art, eps_lp);
  }

  std::vector<double> phase2_cost() const {
    std::vector<double> cost(t_col + 1, 0.0);
    cost[t_col] = 1.0;
    return cost;
  }

  // `refine` re-derives the tableau from pristine data first, so the reported
  // solution is free of drift; mid-column-generation extractions skip that.
  LpSolution extract(std::size_t n, bool refine) {
    if (refine) sx.refactor();
    std::vector<double> z = sx.solution(ncells + 1);
    EntryDistribution mu{n, std::vector<double>(ncells), {"lp", std::nullopt, std::nullopt}};
    double sum = 0.0;
    for (std::size_t c = 0; c < ncells; ++c) {
      double v = z[c];
      if (refine && v < -1e-7)
        throw LpFailure("lp_solve: negative weight " + std::to_string(v), sx.basis());
      mu.weights[c] = std::max(v, 0.0);
      sum += mu.weights[c];
    }
    // Dense-tableau drift over many pivots perturbs the rhs slightly; the
    // renormalization below absorbs it, so only gross violations are fatal.
    if (std::abs(sum - 1.0) > (refine ? 1e-6 : 1e-3))
      throw LpFailure("lp_solve: weights sum to " + std::to_string(sum), sx.basis());
    for (auto& v : mu.weights) v /= sum;
    return LpSolution{std::move(mu), z[t_col]};
  }
};

} // namespace

bool CutSet::add(std::vector<int> x, std::vector<int> y, std::size_t iteration) {
  auto [cx, cy] = canonical_cut(std::move(x), std::move(y));
  for (const Cut& c : cuts_)
    if (c.x == cx && c.y == cy) return false;
  cuts_.push_back(Cut{std::move(cx), std::move(cy), iteration});
  return true;
}

LpSolution lp_solve(const CutSet& cuts, const SignMatrix& g, double eps_lp) {
  if (cuts.size() == 0) throw std::invalid_argument("lp_solve: need at least one cut");
  CutLp lp(cuts, g);
  lp.two_phase(eps_lp);
  return lp.extract(g.n, true);
}

MinimaxResult optimal_distribution(const SignMatrix& g, double eps, unsigned threads) {
  const std::size_t n = g.n;
  if (n == 0 || n > 14) throw std::invalid_argument("optimal_distribution: n must be in [1, 14]");
  if (eps <= 0.0) throw std::invalid_argument("optimal_distribution: eps must be positive");

  const double eps_lp = 1e-9;
  CutSet cuts;
  cuts.add(std::vector<int>(n, 1), std::vector<int>(n, 1), 0);

  CutLp lp(cuts, g);
  lp.two_phase(eps_lp);

  constexpr std::size_t kIterationCap = 1'000'000;
  for (std::size_t iter = 1; iter <= kIterationCap; ++iter) {
    LpSolution sol = lp.extract(n, false);
    BooleanWitnessPair oracle = disc_exact_boolean(g, sol.mu, threads);
    if (oracle.value <= sol.t + eps) {
      sol = lp.extract(n, true);
      MinimaxResult res{std::move(sol.mu), oracle.value, oracle.value - sol.t, iter,
                        std::move(cuts)};
      return res;
    }
    if (!cuts.add(oracle.x, oracle.y, iter))
      throw LpFailure("optimal_distribution: separation returned a duplicate cut", {});
    try {
      lp.add_cut(cuts.cuts().back(), g, eps_lp);
    } catch (const LpFailure&) {
      // Warm-start state went numerically bad; rebuild from the cut pool.
      lp = CutLp(cuts, g);
      lp.two_phase(eps_lp);
    }
  }
  throw LpFailure("optimal_distribution: iteration cap exceeded", {});
}

std::vector<SandwichRow> sandwich_table(const std::vector<std::size_t>& sizes,
                                        const SandwichOptions& opts, MeasureCache* cache) {
  std::vector<SandwichRow> rows;
  MeasureCache local;
  MeasureCache* mc = cache != nullptr ? cache : &local;
  for (std::size_t n : sizes) {
    if (n < 2) throw std::invalid_argument("sandwich_table: sizes must be >= 2");
    SandwichRow row;
    row.n = n;
    double l1 = hilbert_l1(n);
    row.upper_loose = std::numbers::pi * static_cast<double>(n) / l1;
    row.upper_tight =
        static_cast<double>(n) * hilbert_spectral_norm(n, opts.spectral) / l1;
    std::size_t grid = opts.measure_grid_factor * n + 1;
    auto measure =
        mc->get_or_synthesize(FourierTarget{n, TargetSide::NonnegativeHalf}, grid, opts.measure);
    row.lower = certified_lower_bound(*measure);
    row.measure_norm = measure->norm;
    row.measure_converged = measure->converged;
    if (n <= opts.lp_max_n && n <= 14)
      row.lp_value = optimal_distribution(gt_hankel(n), opts.lp_eps, opts.threads).value;
    row.reference = std::numbers::pi / (2.0 * std::log(static_cast<double>(n)));
    rows.push_back(row);
  }
  return rows;
}

} // namespace gtdisc
