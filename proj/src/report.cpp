#include "eqdist/report.hpp"

#include <cmath>
#include <cstdio>

namespace eqdist {

namespace {

Json real_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json to_json(const IntVec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

Json to_json(const RealVec& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(real_or_null(x));
  return a;
}

void write_decay_csv(std::ostream& os, const DecayReport& report) {
  os << "lambda,nu,coeff_re,coeff_im,coeff_mag,normalized\n";
  for (const auto& r : report.records) {
    os << format_real(r.lambda) << ',' << csv_field(format_int_vec(r.nu)) << ',' << format_real(r.coeff.real())
       << ',' << format_real(r.coeff.imag()) << ',' << format_real(r.coeff_mag) << ','
       << format_real(r.normalized) << '\n';
  }
}

Json decay_summary_json(const DecayReport& report) {
  Json j;
  j["nu_box"] = report.nu_box;
  j["tol"] = report.tol;
  j["vdc_constant"] = report.vdc_constant;
  j["degree_below_dim"] = report.degree_below_dim;
  j["failed_records"] = report.failed_records;
  Json levels = Json::array();
  for (const auto& l : report.levels) {
    Json e;
    e["lambda"] = l.lambda;
    e["sup_coeff_mag"] = l.sup_coeff_mag;
    e["sup_weighted"] = l.sup_weighted;
    e["sup_normalized"] = l.sup_normalized;
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return j;
}

Json to_json(const DensityVerdict& v) {
  Json j;
  j["eps"] = v.eps;
  j["grid_side"] = v.grid_side;
  j["cells_total"] = v.cells_total;
  j["cells_hit"] = v.cells_hit;
  j["verdict"] = v.certified_dense ? "certified-dense" : "not-certified";
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  return j;
}

Json to_json(const Dichotomy& d) {
  Json j;
  j["verdict"] = d.equidistributes ? "equidistributes" : "confined";
  j["witness"] = d.witness ? to_json(*d.witness) : Json(nullptr);
  Json basis = Json::array();
  for (const auto& b : d.kernel_basis) basis.push_back(to_json(b));
  j["kernel_basis"] = std::move(basis);
  return j;
}

Json to_json(const BapCertificate& c) {
  Json j;
  j["x"] = to_json(c.x);
  j["c"] = c.c;
  j["q"] = c.q;
  j["cutoff"] = c.cutoff;
  j["norm"] = to_string(c.norm);
  j["status"] = c.verified ? "verified-to-cutoff" : "violated";
  if (c.violator) {
    j["violator"] = to_json(*c.violator);
    j["violator_distance"] = c.violator_distance;
    j["violator_bound"] = c.violator_bound;
  } else {
    j["violator"] = nullptr;
  }
  j["checked"] = c.checked;
  return j;
}

std::string threshold_status(const ThresholdReport& r) {
  if (!r.empirical_T) return "exhausted";
  if (r.bound_exact && static_cast<double>(*r.empirical_T) > r.bound_value) return "above-bound";
  return "ok";
}

Json to_json(const ThresholdReport& r) {
  Json j;
  j["a"] = to_json(r.a);
  j["eps"] = r.eps;
  j["empirical_T"] = r.empirical_T ? Json(*r.empirical_T) : Json("exhausted");
  j["max_iter"] = r.max_iter;
  j["grid_side"] = r.grid_side;
  j["cells_total"] = r.cells_total;
  j["cells_hit"] = r.cells_hit;
  j["exponent"] = real_or_null(r.exponent);
  j["bound_value"] = real_or_null(r.bound_value);
  j["bound_exact"] = r.bound_exact;
  j["status"] = threshold_status(r);
  return j;
}

void write_threshold_csv(std::ostream& os, std::span<const ThresholdReport> reports) {
  os << "epsilon,empirical_T,bound,status\n";
  for (const auto& r : reports) {
    os << format_real(r.eps) << ',' << (r.empirical_T ? std::to_string(*r.empirical_T) : std::string()) << ','
       << format_real(r.bound_value) << ',' << threshold_status(r) << '\n';
  }
}

Json to_json(const DilationThresholdReport& r) {
  Json j;
  j["eps"] = r.eps;
  j["derivative_bap"] = to_json(r.derivative_bap);
  j["warnings"] = r.warnings;
  j["least_certified_lambda"] = r.least_certified_lambda ? Json(*r.least_certified_lambda) : Json(nullptr);
  j["predicted_exponent"] = r.predicted_exponent;
  j["predicted_threshold_constant_free"] = real_or_null(r.predicted_threshold);
  return j;
}

void write_dilation_csv(std::ostream& os, const DilationThresholdReport& r) {
  os << "lambda,samples,cells_hit,cells_total,certified\n";
  for (const auto& l : r.levels)
    os << format_real(l.lambda) << ',' << l.samples << ',' << l.cells_hit << ',' << l.cells_total << ','
       << (l.certified ? "true" : "false") << '\n';
}

void write_nil_csv(std::ostream& os, const NilEquiReport& r) {
  os << "lambda,spec_id,mag\n";
  for (const auto& s : r.series)
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
      os << format_real(r.lambdas[i]) << ',' << csv_field(s.id) << ',' << format_real(s.magnitudes[i]) << '\n';
}

Json to_json(const NilEquiReport& r) {
  Json j;
  j["lambdas"] = to_json(r.lambdas);
  j["horizontal"] = to_json(r.horizontal);
  Json series = Json::array();
  for (const auto& s : r.series) {
    Json e;
    e["spec_id"] = s.id;
    e["magnitudes"] = to_json(s.magnitudes);
    e["decreasing"] = s.decreasing;
    series.push_back(std::move(e));
  }
  j["series"] = std::move(series);
  j["witness_magnitudes"] = to_json(r.witness_magnitudes);
  j["oscillators_decay"] = r.oscillators_decay;
  j["consistent"] = r.consistent;
  j["quotient_convention"] = r.quotient_convention;
  return j;
}

void write_ergodic_csv(std::ostream& os, const DecayDemoReport& r) {
  os << "lambda,norm\n";
  for (const auto& row : r.rows) os << format_real(row.lambda) << ',' << format_real(row.norm) << '\n';
}

Json to_json(const DecayDemoReport& r) {
  Json j;
  j["integrability_value"] = real_or_null(r.integrability.value);
  j["integrability_infinite"] = r.integrability.infinite;
  j["curve_nondegenerate"] = r.curve_nondegenerate;
  j["degenerate_atoms"] = r.degenerate_atoms;
  j["slope"] = r.fit ? Json(r.fit->slope) : Json(nullptr);
  j["intercept"] = r.fit ? Json(r.fit->intercept) : Json(nullptr);
  j["slope_limit"] = r.slope_limit;
  j["asserted"] = r.asserted;
  j["passed"] = r.passed;
  j["notes"] = r.notes;
  return j;
}

}  // namespace eqdist
