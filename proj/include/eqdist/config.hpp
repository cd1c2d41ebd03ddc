#pragma once

// Experiment configuration: a JSON document naming the experiment kind and
// its payload. See README for the field reference.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqdist/curve.hpp"
#include "eqdist/dioph.hpp"
#include "eqdist/ergodic.hpp"
#include "eqdist/heis.hpp"
#include "eqdist/report.hpp"

namespace eqdist {

enum class ExperimentKind {
  torus_decay,
  density,
  dichotomy,
  bap_check,
  t_threshold,
  dilation_threshold,
  heis_eig,
  nil_equi,
  mean_ergodic,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& text);
const std::vector<std::string>& kind_names();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::torus_decay;
  std::optional<RationalPolyCurve> curve;
  /// (2n+1) x d rows of a Heisenberg curve (a, b, c).
  std::optional<RationalPolyCurve> heis_rows;
  std::size_t heis_n = 0;
  RealVec x;
  std::vector<double> lambdas;
  std::vector<double> eps;
  double tol = 1e-10;
  int nu_box = 8;
  double c = 0.38;
  double q = 1.0;
  /// Lattice cutoff for BAP scans. When absent from the input it is chosen
  /// from the dimension: 1e5 for n=1, 1000 for n=2, 100 otherwise.
  std::int64_t cutoff = 100000;
  Norm norm = Norm::l2;
  std::uint64_t max_iter = 10'000'000;
  std::size_t samples = 0;
  std::size_t probe_samples = 64;
  std::size_t points = 100;
  double step = 1e-3;
  std::vector<EigenSpec> specs;
  AtomicSpectralMeasure measure;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = "out";
  std::vector<std::string> warnings;

  /// Normalised echo of the input, sufficient to rerun the experiment.
  Json to_json() const;
};

struct ConfigParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

/// Parses and validates a JSON config. A run manifest is accepted too: its
/// "config" member is used. `kind_override` comes from the CLI subcommand.
ConfigParseResult parse_config(const std::string& text, std::optional<ExperimentKind> kind_override = std::nullopt);

}  // namespace eqdist
