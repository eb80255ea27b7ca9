#pragma once

#include "gtdisc/certificates.hpp"
#include "gtdisc/discrepancy.hpp"
#include "gtdisc/lp.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace gtdisc {

using json = nlohmann::ordered_json;

// Shortest decimal string that round-trips the IEEE double exactly.
std::string double_to_string(double v);
double double_from_string(const std::string& s);

json to_json(const SignMatrix& g);
SignMatrix sign_matrix_from_json(const json& j);

// Hilbert entries serialize as exact round-tripping decimal strings.
json to_json(const HilbertMatrix& h);
HilbertMatrix hilbert_from_json(const json& j);

json to_json(const EntryDistribution& mu);
EntryDistribution distribution_from_json(const json& j);

json to_json(const WitnessPair& w);
json to_json(const BooleanWitnessPair& w);

json to_json(const CircleMeasure& m);
CircleMeasure measure_from_json(const json& j);

// Binary measure format: magic "CMES1", little-endian scalar header
// (u64 T, u64 degree, u8 side, u8 converged, f64 norm), then 2T doubles.
void write_measure_binary(std::ostream& os, const CircleMeasure& m);
CircleMeasure read_measure_binary(std::istream& is);

json to_json(const LowerBoundCertificate& c);
json to_json(const SandwichRow& row);
std::string sandwich_csv(const std::vector<SandwichRow>& rows);

} // namespace gtdisc
