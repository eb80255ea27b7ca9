// Command-line front end: builds matrices and distributions, runs the
// discrepancy experiments, and emits JSON/CSV artifacts with full parameter
// and seed metadata for reproducibility.

#include "gtdisc/certificates.hpp"
#include "gtdisc/discrepancy.hpp"
#include "gtdisc/distributions.hpp"
#include "gtdisc/lp.hpp"
#include "gtdisc/matrices.hpp"
#include "gtdisc/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef GTDISC_VERSION
#define GTDISC_VERSION "0.0.0"
#endif

namespace {

using gtdisc::json;

struct GlobalOpts {
  std::string out;
  std::string config;
  unsigned threads = 0;
};

// Re-applies values from a JSON config file to every option that was not set
// explicitly on the command line (flags win over config, config over defaults).
void merge_config(CLI::App* cmd, const std::string& config_path) {
  if (config_path.empty()) {
    for (CLI::Option* opt : cmd->get_options()) {
      if (opt->get_group() == "REQUIRED" && opt->count() == 0)
        throw CLI::RequiredError(opt->get_name());
    }
    return;
  }
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json cfg = json::parse(in);
  for (CLI::Option* opt : cmd->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (!cfg.contains(name)) continue;
    const json& v = cfg.at(name);
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) {
        if (!joined.empty()) joined += ',';
        joined += e.is_string() ? e.get<std::string>() : e.dump();
      }
      text = joined;
    } else {
      text = v.dump();
    }
    opt->add_result(text);
    opt->run_callback();
  }
  // Required options may be satisfied by the config file; check them last.
  for (CLI::Option* opt : cmd->get_options()) {
    if (opt->get_group() == "REQUIRED" && opt->count() == 0) throw CLI::RequiredError(opt->get_name());
  }
}

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream os(g.out, std::ios::binary);
    if (!os) throw CLI::ValidationError("--out", "cannot open " + g.out);
    os << text << '\n';
  }
}

// Standard JSON envelope: version, command, parameters (seeds included),
// wall-clock, then the payload.
void emit_json(const GlobalOpts& g, const std::string& command, const json& params,
               const json& result, double wall_seconds) {
  json doc;
  doc["version"] = GTDISC_VERSION;
  doc["command"] = command;
  doc["params"] = params;
  doc["wall_clock_seconds"] = wall_seconds;
  doc["result"] = result;
  emit(g, doc.dump(2));
}

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct MuChoice {
  std::string kind = "mu-star"; // mu-star | uniform | eta | random
  std::uint64_t seed = 1;
  unsigned m = 3;
};

void add_mu_options(CLI::App* cmd, MuChoice& mu) {
  cmd->add_option("--mu", mu.kind, "distribution: mu-star|uniform|eta|random")
      ->check(CLI::IsMember({"mu-star", "uniform", "eta", "random"}));
  cmd->add_option("--seed", mu.seed, "seed for --mu random");
  cmd->add_option("--m", mu.m, "bit count for --mu eta (n = 2^m)");
}

gtdisc::EntryDistribution make_mu(const MuChoice& mu, std::size_t n) {
  if (mu.kind == "mu-star") return gtdisc::mu_star(n);
  if (mu.kind == "uniform") return gtdisc::uniform_distribution(n);
  if (mu.kind == "random") return gtdisc::random_distribution(n, mu.seed);
  gtdisc::EtaSpec spec{mu.m};
  if (spec.n() != n)
    throw CLI::ValidationError("--m", "eta needs n = 2^m (got n=" + std::to_string(n) +
                                          ", m=" + std::to_string(mu.m) + ")");
  return gtdisc::eta_pmf(spec);
}

json mu_params(const MuChoice& mu) {
  json p;
  p["mu"] = mu.kind;
  if (mu.kind == "random") p["seed"] = mu.seed;
  if (mu.kind == "eta") p["m"] = mu.m;
  return p;
}

gtdisc::SignMatrix make_matrix(std::size_t n, const std::string& orientation) {
  return orientation == "toeplitz" ? gtdisc::gt_toeplitz(n) : gtdisc::gt_hankel(n);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"greater-than matrix discrepancy toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GTDISC_VERSION);

  GlobalOpts g;
  std::string cfg_help = "JSON config file; explicit flags take precedence";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", g.out, "write output to this path instead of stdout");
    cmd->add_option("--config", g.config, cfg_help);
    cmd->add_option("--threads", g.threads, "worker threads (0 = all cores)");
  };

  // ---- gen-matrix ----
  std::size_t n = 8;
  std::string orientation = "hankel";
  CLI::App* gen = app.add_subcommand("gen-matrix", "emit the greater-than sign matrix");
  gen->add_option("--n", n, "matrix size")->group("REQUIRED");
  gen->add_option("--orientation", orientation, "hankel|toeplitz")
      ->check(CLI::IsMember({"hankel", "toeplitz"}));
  add_common(gen);

  // ---- mu-star ----
  CLI::App* mustar = app.add_subcommand("mu-star", "Hilbert-matrix distribution");
  mustar->add_option("--n", n, "matrix size")->group("REQUIRED");
  add_common(mustar);

  // ---- eta ----
  unsigned eta_m = 3;
  std::size_t eta_samples = 0;
  std::uint64_t eta_seed = 1;
  CLI::App* eta = app.add_subcommand("eta", "bit-sampling distribution on n = 2^m");
  eta->add_option("--m", eta_m, "bit count")->group("REQUIRED");
  eta->add_option("--samples", eta_samples, "also emit this many draws");
  eta->add_option("--seed", eta_seed, "seed for --samples");
  add_common(eta);

  // ---- disc-exact ----
  MuChoice mu;
  CLI::App* dexact = app.add_subcommand("disc-exact", "exact boolean discrepancy (n <= 28)");
  dexact->add_option("--n", n, "matrix size")->group("REQUIRED");
  dexact->add_option("--orientation", orientation, "hankel|toeplitz")
      ->check(CLI::IsMember({"hankel", "toeplitz"}));
  add_mu_options(dexact, mu);
  add_common(dexact);

  // ---- disc-alt ----
  std::size_t restarts = 8, alt_iters = 200;
  std::uint64_t alt_seed = 1;
  CLI::App* dalt = app.add_subcommand("disc-alt", "alternating complex maximizer heuristic");
  dalt->add_option("--n", n, "matrix size")->group("REQUIRED");
  dalt->add_option("--orientation", orientation, "hankel|toeplitz")
      ->check(CLI::IsMember({"hankel", "toeplitz"}));
  dalt->add_option("--restarts", restarts, "random restarts (first start is all-ones)");
  dalt->add_option("--iters", alt_iters, "max half-step sweeps per restart");
  dalt->add_option("--alt-seed", alt_seed, "seed for restart phases");
  add_mu_options(dalt, mu);
  add_common(dalt);

  // ---- spectral ----
  gtdisc::SpectralOptions sopts;
  CLI::App* spectral = app.add_subcommand("spectral", "Hilbert spectral norm and upper bounds");
  spectral->add_option("--n", n, "matrix size")->group("REQUIRED");
  spectral->add_option("--tol", sopts.tol, "power-iteration relative tolerance");
  spectral->add_option("--max-iters", sopts.max_iters, "power-iteration cap");
  spectral->add_option("--restart-seed", sopts.restart_seed, "seed for the random restart");
  add_common(spectral);

  // ---- l1norm ----
  CLI::App* l1 = app.add_subcommand("l1norm", "entrywise L1 norm of the Hilbert matrix");
  l1->add_option("--n", n, "matrix size")->group("REQUIRED");
  add_common(l1);

  // ---- measure-synth ----
  std::size_t grid_t = 0;
  std::string side = "nonnegative";
  std::string binary_out;
  gtdisc::SolverOptions solver;
  solver.relax = 1.9;
  CLI::App* synth = app.add_subcommand("measure-synth", "minimal-norm half-line Fourier measure");
  synth->add_option("--n", n, "interpolation degree")->group("REQUIRED");
  synth->add_option("--T", grid_t, "grid size (default 8n+1, must be >= 4n+1)");
  synth->add_option("--side", side, "nonnegative|negative half-line target")
      ->check(CLI::IsMember({"nonnegative", "negative"}));
  synth->add_option("--max-iters", solver.max_iters, "iteration cap (0 = 50T)");
  synth->add_option("--step", solver.step, "soft-threshold level");
  synth->add_option("--tol", solver.tol, "relative norm-decrease stop");
  synth->add_option("--relax", solver.relax, "Douglas-Rachford relaxation in (0,2)");
  synth->add_option("--binary-out", binary_out, "also write the measure in binary form here");
  add_common(synth);

  // ---- certify ----
  std::size_t scan_grid = 0;
  CLI::App* certify = app.add_subcommand("certify", "verify the certified lower-bound chain");
  certify->add_option("--n", n, "matrix size")->group("REQUIRED");
  certify->add_option("--T", grid_t, "measure grid (default 8n+1)");
  certify->add_option("--scan-grid", scan_grid, "witness scan grid (default 16n)");
  certify->add_option("--max-iters", solver.max_iters, "synthesis iteration cap (0 = 50T)");
  certify->add_option("--relax", solver.relax, "Douglas-Rachford relaxation in (0,2)");
  add_mu_options(certify, mu);
  add_common(certify);

  // ---- lp-opt ----
  double lp_eps = 1e-6;
  CLI::App* lpopt = app.add_subcommand("lp-opt", "exact boolean minimax via column generation");
  lpopt->add_option("--n", n, "matrix size (n <= 14)")->group("REQUIRED");
  lpopt->add_option("--eps", lp_eps, "oracle/LP gap tolerance");
  add_common(lpopt);

  // ---- table ----
  std::vector<std::size_t> sizes;
  std::string format = "csv";
  gtdisc::SandwichOptions topts;
  topts.measure.relax = 1.9;
  CLI::App* table = app.add_subcommand("table", "lower/upper/minimax sandwich table");
  table->add_option("--n", sizes, "comma-separated sizes")->group("REQUIRED")->delimiter(',');
  table->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--lp-max-n", topts.lp_max_n, "run the exact LP only up to this size");
  table->add_option("--lp-eps", topts.lp_eps, "LP gap tolerance");
  table->add_option("--grid-factor", topts.measure_grid_factor, "measure grid T = factor*n + 1");
  table->add_option("--max-iters", topts.measure.max_iters, "synthesis iteration cap (0 = 50T)");
  table->add_option("--relax", topts.measure.relax, "Douglas-Rachford relaxation in (0,2)");
  add_common(table);

  try {
    app.parse(argc, argv);
    CLI::App* cmd = app.get_subcommands().front();
    merge_config(cmd, g.config);
    Timer timer;

    if (cmd == gen) {
      json params{{"n", n}, {"orientation", orientation}};
      emit_json(g, "gen-matrix", params, gtdisc::to_json(make_matrix(n, orientation)),
                timer.seconds());
    } else if (cmd == mustar) {
      emit_json(g, "mu-star", json{{"n", n}}, gtdisc::to_json(gtdisc::mu_star(n)),
                timer.seconds());
    } else if (cmd == eta) {
      gtdisc::EtaSpec spec{eta_m};
      json params{{"m", eta_m}};
      json result;
      result["n"] = spec.n();
      result["weight_threshold"] = gtdisc::eta_weight_threshold(spec);
      result["witness_value"] = gtdisc::eta_witness_value(spec);
      if (eta_m <= 12) result["pmf"] = gtdisc::to_json(gtdisc::eta_pmf(spec));
      if (eta_samples > 0) {
        params["samples"] = eta_samples;
        params["seed"] = eta_seed;
        std::mt19937_64 rng(eta_seed);
        json draws = json::array();
        for (std::size_t i = 0; i < eta_samples; ++i) {
          auto [j, k] = gtdisc::eta_sample(spec, rng);
          draws.push_back(json::array({j, k}));
        }
        result["draws"] = std::move(draws);
      }
      emit_json(g, "eta", params, result, timer.seconds());
    } else if (cmd == dexact) {
      auto gmat = make_matrix(n, orientation);
      auto dist = make_mu(mu, n);
      auto w = gtdisc::disc_exact_boolean(gmat, dist, g.threads);
      json params = mu_params(mu);
      params["n"] = n;
      params["orientation"] = orientation;
      params["threads"] = g.threads;
      emit_json(g, "disc-exact", params, gtdisc::to_json(w), timer.seconds());
    } else if (cmd == dalt) {
      auto gmat = make_matrix(n, orientation);
      auto dist = make_mu(mu, n);
      auto w = gtdisc::disc_alternating(gmat, dist, restarts, alt_iters, alt_seed);
      json params = mu_params(mu);
      params["n"] = n;
      params["orientation"] = orientation;
      params["restarts"] = restarts;
      params["iters"] = alt_iters;
      params["alt_seed"] = alt_seed;
      emit_json(g, "disc-alt", params, gtdisc::to_json(w), timer.seconds());
    } else if (cmd == spectral) {
      json params{{"n", n},
                  {"tol", sopts.tol},
                  {"max_iters", sopts.max_iters},
                  {"restart_seed", sopts.restart_seed}};
      double sigma = gtdisc::hilbert_spectral_norm(n, sopts);
      auto bounds = gtdisc::spectral_upper_bound(n, sopts);
      json result{{"sigma_max", sigma},
                  {"upper_loose", bounds.loose},
                  {"upper_tight", bounds.tight}};
      emit_json(g, "spectral", params, result, timer.seconds());
    } else if (cmd == l1) {
      json result{{"l1_direct", gtdisc::hilbert_l1(n)},
                  {"l1_by_diagonals", gtdisc::hilbert_l1_by_diagonals(n)}};
      emit_json(g, "l1norm", json{{"n", n}}, result, timer.seconds());
    } else if (cmd == synth) {
      if (grid_t == 0) grid_t = 8 * n + 1;
      gtdisc::FourierTarget target{n, side == "nonnegative" ? gtdisc::TargetSide::NonnegativeHalf
                                                            : gtdisc::TargetSide::NegativeHalf};
      auto measure = gtdisc::synthesize_measure(target, grid_t, solver);
      if (!binary_out.empty()) {
        std::ofstream bs(binary_out, std::ios::binary);
        if (!bs) throw CLI::ValidationError("--binary-out", "cannot open " + binary_out);
        gtdisc::write_measure_binary(bs, measure);
      }
      json params{{"n", n},           {"T", grid_t},
                  {"side", side},     {"max_iters", solver.max_iters},
                  {"step", solver.step}, {"tol", solver.tol},
                  {"relax", solver.relax}};
      emit_json(g, "measure-synth", params, gtdisc::to_json(measure), timer.seconds());
    } else if (cmd == certify) {
      if (grid_t == 0) grid_t = 8 * n + 1;
      if (scan_grid == 0) scan_grid = 16 * n;
      auto dist = make_mu(mu, n);
      if (mu.kind == "mu-star") dist = gtdisc::hankel_to_toeplitz(dist);
      gtdisc::FourierTarget target{n, gtdisc::TargetSide::NonnegativeHalf};
      auto measure = gtdisc::synthesize_measure(target, grid_t, solver);
      auto cert = gtdisc::verify_certificate(dist, measure, scan_grid);
      json params = mu_params(mu);
      params["n"] = n;
      params["T"] = grid_t;
      params["scan_grid"] = scan_grid;
      params["max_iters"] = solver.max_iters;
      params["relax"] = solver.relax;
      emit_json(g, "certify", params, gtdisc::to_json(cert), timer.seconds());
    } else if (cmd == lpopt) {
      auto gmat = gtdisc::gt_hankel(n);
      auto res = gtdisc::optimal_distribution(gmat, lp_eps, g.threads);
      json params{{"n", n}, {"eps", lp_eps}, {"threads", g.threads}};
      json result{{"value", res.value},
                  {"gap", res.gap},
                  {"iterations", res.iterations},
                  {"cuts", res.cuts.size()},
                  {"mu_opt", gtdisc::to_json(res.mu_opt)}};
      emit_json(g, "lp-opt", params, result, timer.seconds());
    } else if (cmd == table) {
      topts.threads = g.threads;
      gtdisc::MeasureCache cache;
      auto rows = gtdisc::sandwich_table(sizes, topts, &cache);
      json params{{"n", sizes},
                  {"format", format},
                  {"lp_max_n", topts.lp_max_n},
                  {"lp_eps", topts.lp_eps},
                  {"grid_factor", topts.measure_grid_factor},
                  {"max_iters", topts.measure.max_iters},
                  {"relax", topts.measure.relax},
                  {"threads", g.threads}};
      if (format == "json") {
        json result = json::array();
        for (const auto& row : rows) result.push_back(gtdisc::to_json(row));
        emit_json(g, "table", params, result, timer.seconds());
      } else {
        std::ostringstream os;
        os << "# version=" << GTDISC_VERSION << '\n';
        os << "# params=" << params.dump() << '\n';
        os << "# wall_clock_seconds=" << timer.seconds() << '\n';
        os << gtdisc::sandwich_csv(rows);
        std::string text = os.str();
        if (!text.empty() && text.back() == '\n') text.pop_back();
        emit(g, text);
      }
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
