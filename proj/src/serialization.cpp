#include "gtdisc/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace gtdisc {

std::string double_to_string(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double double_from_string(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad double literal: " + s);
  return v;
}

json to_json(const SignMatrix& g) {
  return json{{"n", g.n}, {"orientation", to_string(g.orientation)}, {"entries", g.entries}};
}

SignMatrix sign_matrix_from_json(const json& j) {
  SignMatrix g;
  g.n = j.at("n").get<std::size_t>();
  g.orientation = orientation_from_string(j.at("orientation").get<std::string>());
  g.entries = j.at("entries").get<std::vector<double>>();
  if (g.entries.size() != g.n * g.n) throw std::invalid_argument("sign matrix: bad entry count");
  for (double v : g.entries)
    if (v != 1.0 && v != -1.0) throw std::invalid_argument("sign matrix: entry not +-1");
  return g;
}

json to_json(const HilbertMatrix& h) {
  json entries = json::array();
  for (double v : h.entries) entries.push_back(double_to_string(v));
  return json{{"n", h.n}, {"entries", std::move(entries)}};
}

HilbertMatrix hilbert_from_json(const json& j) {
  HilbertMatrix h;
  h.n = j.at("n").get<std::size_t>();
  for (const auto& s : j.at("entries")) h.entries.push_back(double_from_string(s.get<std::string>()));
  if (h.entries.size() != h.n * h.n) throw std::invalid_argument("hilbert matrix: bad entry count");
  return h;
}

json to_json(const EntryDistribution& mu) {
  json meta{{"kind", mu.meta.kind}};
  if (mu.meta.seed) meta["seed"] = *mu.meta.seed;
  if (mu.meta.m) meta["m"] = *mu.meta.m;
  return json{{"n", mu.n}, {"weights", mu.weights}, {"meta", std::move(meta)}};
}

EntryDistribution distribution_from_json(const json& j) {
  EntryDistribution mu;
  mu.n = j.at("n").get<std::size_t>();
  mu.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    mu.meta.kind = meta.value("kind", "custom");
    if (meta.contains("seed")) mu.meta.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("m")) mu.meta.m = meta.at("m").get<unsigned>();
  }
  mu.validate();
  return mu;
}

namespace {
json complex_array(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(json::array({z.real(), z.imag()}));
  return out;
}

std::vector<cplx> complex_array_from(const json& j) {
  std::vector<cplx> out;
  for (const auto& pair : j) out.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return out;
}
} // namespace

json to_json(const WitnessPair& w) {
  return json{{"x", complex_array(w.x)}, {"y", complex_array(w.y)}, {"value", w.value}};
}

json to_json(const BooleanWitnessPair& w) {
  return json{{"x", w.x}, {"y", w.y}, {"value", w.value}};
}

json to_json(const CircleMeasure& m) {
  return json{{"n", m.degree},
              {"side", to_string(m.side)},
              {"T", m.grid},
              {"atoms", complex_array(m.atoms)},
              {"norm", m.norm},
              {"solver",
               {{"max_iters", m.solver.max_iters},
                {"step", m.solver.step},
                {"tol", m.solver.tol},
                {"relax", m.solver.relax}}},
              {"converged", m.converged}};
}

CircleMeasure measure_from_json(const json& j) {
  CircleMeasure m;
  m.degree = j.at("n").get<std::size_t>();
  m.side = side_from_string(j.at("side").get<std::string>());
  m.grid = j.at("T").get<std::size_t>();
  m.atoms = complex_array_from(j.at("atoms"));
  m.norm = j.at("norm").get<double>();
  m.converged = j.at("converged").get<bool>();
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    m.solver.max_iters = s.value("max_iters", std::size_t{0});
    m.solver.step = s.value("step", 1.0);
    m.solver.tol = s.value("tol", 1e-10);
    m.solver.relax = s.value("relax", 1.0);
  }
  if (m.atoms.size() != m.grid) throw std::invalid_argument("measure: atom count != T");
  return m;
}

namespace {
template <typename T>
void write_le(std::ostream& os, T v) {
  // Host is little-endian on all supported targets.
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
} // namespace

void write_measure_binary(std::ostream& os, const CircleMeasure& m) {
  os.write("CMES1", 5);
  write_le<std::uint64_t>(os, m.grid);
  write_le<std::uint64_t>(os, m.degree);
  write_le<std::uint8_t>(os, m.side == TargetSide::NonnegativeHalf ? 0 : 1);
  write_le<std::uint8_t>(os, m.converged ? 1 : 0);
  write_le<double>(os, m.norm);
  for (const cplx& z : m.atoms) {
    write_le<double>(os, z.real());
    write_le<double>(os, z.imag());
  }
}

CircleMeasure read_measure_binary(std::istream& is) {
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, "CMES1", 5) != 0)
    throw std::runtime_error("measure: bad magic");
  CircleMeasure m;
  m.grid = read_le<std::uint64_t>(is);
  m.degree = read_le<std::uint64_t>(is);
  m.side = read_le<std::uint8_t>(is) == 0 ? TargetSide::NonnegativeHalf : TargetSide::NegativeHalf;
  m.converged = read_le<std::uint8_t>(is) != 0;
  m.norm = read_le<double>(is);
  m.atoms.resize(m.grid);
  for (auto& z : m.atoms) {
    double re = read_le<double>(is);
    double im = read_le<double>(is);
    z = cplx{re, im};
  }
  if (!is) throw std::invalid_argument("measure: truncated binary stream");
  return m;
}

json to_json(const LowerBoundCertificate& c) {
  return json{{"claimed_disc_lower", c.claimed_disc_lower},
              {"pr_ge", c.pr_ge},
              {"chain_sum", c.chain_sum},
              {"scan_max", c.scan_max},
              {"t_star", c.t_star},
              {"side", to_string(c.side)},
              {"measure_norm", c.measure_norm},
              {"mu", c.mu_id},
              {"witness", to_json(c.witness)}};
}

json to_json(const SandwichRow& row) {
  json j{{"n", row.n},
         {"lower", row.lower},
         {"upper_loose", row.upper_loose},
         {"upper_tight", row.upper_tight},
         {"reference", row.reference},
         {"measure_norm", row.measure_norm},
         {"measure_converged", row.measure_converged}};
  if (std::isnan(row.lp_value))
    j["lp_value"] = nullptr;
  else
    j["lp_value"] = row.lp_value;
  return j;
}

std::string sandwich_csv(const std::vector<SandwichRow>& rows) {
  std::ostringstream os;
  os << "n,lower,upper_loose,upper_tight,lp_value,reference\n";
  for (const SandwichRow& r : rows) {
    os << r.n << ',' << double_to_string(r.lower) << ',' << double_to_string(r.upper_loose) << ','
       << double_to_string(r.upper_tight) << ',';
    if (!std::isnan(r.lp_value)) os << double_to_string(r.lp_value);
    os << ',' << double_to_string(r.reference) << '\n';
  }
  return os.str();
}

} // namespace gtdisc
