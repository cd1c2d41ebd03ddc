#include "eqdist/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include "eqdist/errors.hpp"
#include "eqdist/oscint.hpp"
#include "eqdist/parallel.hpp"
#include "eqdist/torus.hpp"

#ifndef EQDIST_VERSION
#define EQDIST_VERSION "0.0.0"
#endif

namespace eqdist {

std::string tool_version() { return EQDIST_VERSION; }

namespace {

namespace fs = std::filesystem;

class Outputs {
 public:
  Outputs(const fs::path& dir, RunResult& result) : dir_(dir), result_(result) {}

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ResourceError("cannot write " + (dir_ / name).string());
    result_.outputs.push_back(name);
    return os;
  }

  void json(const std::string& name, const Json& j) {
    auto os = open(name);
    os << j.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  RunResult& result_;
};

void check(RunResult& r, std::string name, bool passed, std::string detail) {
  r.checks.push_back({std::move(name), passed, std::move(detail)});
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void run_torus_decay(const ExperimentConfig& cfg, Outputs& out, RunResult& r) {
  const PolyCurve curve = cfg.curve->to_real();
  DecaySweepOptions opt;
  opt.nu_box = cfg.nu_box;
  opt.tol = cfg.tol;
  opt.probe_samples = cfg.probe_samples;
  opt.probe_seed = cfg.seed;
  opt.threads = cfg.threads;
  const DecayReport rep = decay_sweep(curve, cfg.lambdas, opt);
  {
    auto os = out.open("decay.csv");
    write_decay_csv(os, rep);
  }
  Json summary = decay_summary_json(rep);
  const auto kernel = real_kernel_trivial(curve);
  summary["real_kernel_trivial"] = kernel.trivial;
  if (kernel.trivial && rep.levels.size() >= 3) {
    const double expected = -1.0 / static_cast<double>(curve.degree());
    const PowerLawFit fit = fit_decay_exponent(rep.levels, cfg.tol);
    const double spread = normalized_spread(rep.levels);
    summary["slope"] = fit.slope;
    summary["expected_slope"] = expected;
    summary["spread"] = spread;
    check(r, "decay slope", std::abs(fit.slope - expected) <= 0.15,
          "slope " + format_real(fit.slope) + " vs " + format_real(expected) + " +- 0.15");
    check(r, "normalized spread", spread <= 3.0, "max/median " + format_real(spread) + " <= 3");
  }
  out.json("decay.json", summary);
}

DensityVerdict stream_density(const PolyCurve& curve, double lambda, double eps, std::size_t samples) {
  DensityGrid grid(curve.dim(), eps);
  RealVec p(curve.dim());
  for (std::size_t i = 0; i < samples && !grid.complete(); ++i) {
    const double t = samples > 1 ? static_cast<double>(i) / static_cast<double>(samples - 1) : 0.0;
    const RealVec v = curve.eval(t);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double s = lambda * v[j];
      p[j] = s - std::floor(s);
      if (p[j] >= 1.0) p[j] = 0.0;
    }
    grid.insert(p);
  }
  return verdict_from_grid(grid, eps);
}

void run_density(const ExperimentConfig& cfg, Outputs& out, RunResult&) {
  const PolyCurve curve = cfg.curve->to_real();
  struct Item {
    double lambda, eps;
  };
  std::vector<Item> items;
  for (double l : cfg.lambdas)
    for (double e : cfg.eps) items.push_back({l, e});
  auto verdicts = parallel_map(items.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t n = cfg.samples ? cfg.samples : default_orbit_samples(curve, items[i].lambda);
    return std::pair{n, stream_density(curve, items[i].lambda, items[i].eps, n)};
  });
  auto entry = [&](std::size_t i) {
    Json j;
    j["lambda"] = items[i].lambda;
    j["samples"] = verdicts[i].first;
    for (const auto& [k, v] : to_json(verdicts[i].second).items()) j[k] = v;
    return j;
  };
  if (items.size() == 1) {
    out.json("density.json", entry(0));
  } else {
    Json j;
    j["verdicts"] = Json::array();
    for (std::size_t i = 0; i < items.size(); ++i) j["verdicts"].push_back(entry(i));
    out.json("density.json", j);
  }
}

void run_dichotomy(const ExperimentConfig& cfg, Outputs& out, RunResult&) {
  out.json("dichotomy.json", to_json(equidistribution_dichotomy(*cfg.curve)));
}

void run_bap(const ExperimentConfig& cfg, Outputs& out, RunResult&) {
  out.json("bap.json", to_json(bap_check(cfg.x, cfg.c, cfg.q, cfg.cutoff, cfg.norm)));
}

void run_t_threshold(const ExperimentConfig& cfg, Outputs& out, RunResult& r) {
  const BapCertificate cert = bap_check(cfg.x, cfg.c, cfg.q, cfg.cutoff, cfg.norm);
  auto reports = parallel_map(cfg.eps.size(), cfg.threads, [&](std::size_t i) {
    return t_empirical(cfg.x, cfg.eps[i], cfg.max_iter, BapParams{cfg.c, cfg.q});
  });
  {
    auto os = out.open("threshold.csv");
    write_threshold_csv(os, reports);
  }
  Json j;
  j["bap"] = to_json(cert);
  j["reports"] = Json::array();
  for (const auto& rep : reports) j["reports"].push_back(to_json(rep));
  out.json("threshold.json", j);
  if (cfg.x.size() == 1 && cert.verified) {
    bool ok = true;
    std::string detail = "empirical T within 1/(c eps^(q+1))";
    for (const auto& rep : reports)
      if (threshold_status(rep) == "above-bound") {
        ok = false;
        detail = "bound exceeded at eps " + format_real(rep.eps);
        break;
      }
    check(r, "threshold bound", ok, detail);
  }
}

void run_dilation(const ExperimentConfig& cfg, Outputs& out, RunResult&) {
  const PolyCurve curve = cfg.curve->to_real();
  DilationExperimentOptions opt;
  opt.bap = {cfg.c, cfg.q};
  opt.cutoff = cfg.cutoff;
  opt.norm = cfg.norm;
  opt.samples = cfg.samples;
  opt.threads = cfg.threads;
  Json j;
  j["runs"] = Json::array();
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
    const auto rep = dilation_threshold_experiment(curve, cfg.eps[i], cfg.lambdas, opt);
    const std::string name = cfg.eps.size() == 1 ? "dilation.csv" : "dilation_" + std::to_string(i + 1) + ".csv";
    auto os = out.open(name);
    write_dilation_csv(os, rep);
    Json e = to_json(rep);
    e["csv"] = name;
    j["runs"].push_back(std::move(e));
  }
  out.json("dilation.json", j);
}

HeisPoint random_point(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  HeisPoint g = HeisPoint::identity(n);
  for (auto& v : g.x) v = u(rng);
  for (auto& v : g.y) v = u(rng);
  g.z = u(rng);
  return g;
}

HeisPoint random_lattice(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-3, 3);
  HeisPoint g = HeisPoint::identity(n);
  for (auto& v : g.x) v = u(rng);
  for (auto& v : g.y) v = u(rng);
  g.z = u(rng);
  return g;
}

std::complex<double> eval_raw(const EigenSpec& spec, const HeisPoint& g) {
  if (const auto* f = std::get_if<Horizontal>(&spec)) return eval_f(f->k, f->h, g);
  return eval_g(std::get<Oscillator>(spec), g);
}

void run_heis_eig(const ExperimentConfig& cfg, Outputs& out, RunResult& r) {
  const std::size_t n = spec_dim(cfg.specs.front());
  // One shared stream of test points so every spec sees the same sample.
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::pair<HeisPoint, HeisPoint>> samples;
  for (std::size_t i = 0; i < cfg.points; ++i) {
    HeisPoint g = random_point(n, rng, 0.0, 1.0);
    samples.emplace_back(std::move(g), random_lattice(n, rng));
  }
  struct Row {
    double invariance = 0.0, residual = 0.0;
  };
  auto rows = parallel_map(cfg.specs.size(), cfg.threads, [&](std::size_t s) {
    Row row;
    const auto& spec = cfg.specs[s];
    for (const auto& [g, gamma] : samples) {
      const auto base = eval_raw(spec, g);
      const auto moved = eval_raw(spec, heis_mul(gamma, g));
      row.invariance = std::max(row.invariance, std::abs(moved - base) / std::max(1.0, std::abs(base)));
      row.residual = std::max(row.residual, laplacian_residual(spec, g, cfg.step));
    }
    return row;
  });
  Json j;
  j["points"] = cfg.points;
  j["step"] = cfg.step;
  j["specs"] = Json::array();
  double worst_inv = 0.0, worst_res = 0.0;
  for (std::size_t s = 0; s < cfg.specs.size(); ++s) {
    Json e;
    e["spec_id"] = spec_id(cfg.specs[s]);
    e["eigenvalue"] = eigenvalue(cfg.specs[s]);
    e["invariance_error"] = rows[s].invariance;
    e["laplacian_residual"] = rows[s].residual;
    j["specs"].push_back(std::move(e));
    worst_inv = std::max(worst_inv, rows[s].invariance);
    worst_res = std::max(worst_res, rows[s].residual);
  }
  out.json("heis_eig.json", j);
  check(r, "lattice invariance", worst_inv <= 1e-8, "max " + format_real(worst_inv) + " <= 1e-8");
  check(r, "laplacian residual", worst_res <= 1e-3, "max " + format_real(worst_res) + " <= 1e-3");
}

void run_nil_equi(const ExperimentConfig& cfg, Outputs& out, RunResult& r) {
  const HeisCurve curve(cfg.heis_n, *cfg.heis_rows);
  std::vector<EigenSpec> specs = cfg.specs;
  if (specs.empty()) {
    const std::size_t n = cfg.heis_n;
    specs.push_back(Oscillator{IntVec(n, 0), 1, std::vector<int>(n, 0)});
  }
  NilEquiOptions opt;
  opt.samples = cfg.samples;
  opt.threads = cfg.threads;
  const auto rep = nil_equi_experiment(curve, cfg.lambdas, specs, opt);
  {
    auto os = out.open("nil.csv");
    write_nil_csv(os, rep);
  }
  out.json("nil.json", to_json(rep));
  check(r, "nil/horizontal consistency", rep.consistent,
        rep.consistent ? "consistent" : "horizontal equidistribution without oscillator decay");
}

void run_mean_ergodic(const ExperimentConfig& cfg, Outputs& out, RunResult& r) {
  const PolyCurve curve = cfg.curve->to_real();
  const auto rep = decay_demo(cfg.measure, curve, cfg.lambdas, std::min(cfg.tol, 1e-12), cfg.threads);
  {
    auto os = out.open("ergodic.csv");
    write_ergodic_csv(os, rep);
  }
  out.json("ergodic.json", to_json(rep));
  if (rep.asserted) check(r, "ergodic decay slope", rep.passed, rep.passed ? "within limit" : "slope above limit");
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    result.exit_code = kExitResourceError;
    result.messages.push_back("cannot create output directory " + dir.string() + ": " + ec.message());
    return result;
  }
  Outputs out(dir, result);
  for (const auto& w : cfg.warnings) result.messages.push_back("warning: " + w);

  try {
    using K = ExperimentKind;
    switch (cfg.kind) {
      case K::torus_decay: run_torus_decay(cfg, out, result); break;
      case K::density: run_density(cfg, out, result); break;
      case K::dichotomy: run_dichotomy(cfg, out, result); break;
      case K::bap_check: run_bap(cfg, out, result); break;
      case K::t_threshold: run_t_threshold(cfg, out, result); break;
      case K::dilation_threshold: run_dilation(cfg, out, result); break;
      case K::heis_eig: run_heis_eig(cfg, out, result); break;
      case K::nil_equi: run_nil_equi(cfg, out, result); break;
      case K::mean_ergodic: run_mean_ergodic(cfg, out, result); break;
    }
    for (const auto& c : result.checks)
      if (!c.passed) result.exit_code = kExitCheckFailed;
  } catch (const ResourceError& e) {
    result.exit_code = kExitResourceError;
    result.messages.push_back(std::string("resource error: ") + e.what());
  } catch (const std::domain_error& e) {
    result.exit_code = kExitInputError;
    result.messages.push_back(std::string("input error: ") + e.what());
  } catch (const InsufficientDataError& e) {
    result.exit_code = kExitInputError;
    result.messages.push_back(std::string("input error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitInputError;
    result.messages.push_back(std::string("input error: ") + e.what());
  } catch (const std::bad_alloc&) {
    result.exit_code = kExitResourceError;
    result.messages.push_back("resource error: out of memory");
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json m;
  m["tool"] = "eqdist";
  m["version"] = tool_version();
  m["kind"] = to_string(cfg.kind);
  m["seed"] = cfg.seed;
  m["threads"] = cfg.threads;
  m["started_utc"] = started;
  m["wall_time_s"] = wall;
  m["exit_code"] = result.exit_code;
  m["outputs"] = result.outputs;
  Json checks = Json::array();
  for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  m["checks"] = std::move(checks);
  m["warnings"] = cfg.warnings;
  m["messages"] = result.messages;
  m["config"] = cfg.to_json();
  try {
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
  } catch (...) {
    result.exit_code = kExitResourceError;
  }
  return result;
}

}  // namespace eqdist
