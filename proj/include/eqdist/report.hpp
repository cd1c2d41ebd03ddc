#pragma once

// CSV and JSON serialisation of experiment results. Reals are printed with
// 17 significant digits; JSON objects keep insertion order.

#include <ostream>
#include <string>

#include <json.hpp>

#include "eqdist/dioph.hpp"
#include "eqdist/ergodic.hpp"
#include "eqdist/heis.hpp"
#include "eqdist/torus.hpp"

namespace eqdist {

using Json = nlohmann::ordered_json;

std::string format_real(double v);
/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

Json to_json(const IntVec& v);
Json to_json(const RealVec& v);

void write_decay_csv(std::ostream& os, const DecayReport& report);
Json decay_summary_json(const DecayReport& report);

Json to_json(const DensityVerdict& v);
Json to_json(const Dichotomy& d);
Json to_json(const BapCertificate& c);
Json to_json(const ThresholdReport& r);
/// "ok", "exhausted" or "above-bound".
std::string threshold_status(const ThresholdReport& r);
void write_threshold_csv(std::ostream& os, std::span<const ThresholdReport> reports);

Json to_json(const DilationThresholdReport& r);
void write_dilation_csv(std::ostream& os, const DilationThresholdReport& r);

void write_nil_csv(std::ostream& os, const NilEquiReport& r);
Json to_json(const NilEquiReport& r);

void write_ergodic_csv(std::ostream& os, const DecayDemoReport& r);
Json to_json(const DecayDemoReport& r);

}  // namespace eqdist
