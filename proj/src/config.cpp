#include "eqdist/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "eqdist/errors.hpp"
#include "eqdist/fit.hpp"

namespace eqdist {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_table() {
  static const std::vector<std::pair<ExperimentKind, std::string>> table = {
      {ExperimentKind::torus_decay, "torus-decay"},
      {ExperimentKind::density, "density"},
      {ExperimentKind::dichotomy, "dichotomy"},
      {ExperimentKind::bap_check, "bap-check"},
      {ExperimentKind::t_threshold, "t-threshold"},
      {ExperimentKind::dilation_threshold, "dilation-threshold"},
      {ExperimentKind::heis_eig, "heis-eig"},
      {ExperimentKind::nil_equi, "nil-equi"},
      {ExperimentKind::mean_ergodic, "mean-ergodic"},
  };
  return table;
}

const std::set<std::string> kKnownKeys = {
    "kind", "curve", "heis_curve", "x", "lambdas", "lambda", "eps", "tol", "nu_box", "c", "q", "cutoff", "norm",
    "max_iter", "samples", "probe_samples", "points", "step", "specs", "atoms", "uniform_box", "seed", "threads",
    "out"};

std::string rational_text(const Rational& r) { return r.str(); }

std::string curve_text(const RationalPolyCurve& c) {
  std::string s = "n=" + std::to_string(c.dim()) + "; d=" + std::to_string(c.degree()) + "; coeffs=";
  for (std::size_t i = 0; i < c.coeffs().size(); ++i) {
    if (i) s += ", ";
    s += rational_text(c.coeffs()[i]);
  }
  return s;
}

class Reader {
 public:
  Reader(const Json& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

  bool has(const std::string& key) const { return root_.contains(key); }

  template <class T>
  std::optional<T> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = root_[key];
    if (!v.is_number()) {
      errors_.push_back("field '" + key + "' must be a number");
      return std::nullopt;
    }
    if constexpr (std::is_integral_v<T>) {
      const double d = v.get<double>();
      if (std::floor(d) != d) {
        errors_.push_back("field '" + key + "' must be an integer");
        return std::nullopt;
      }
      return static_cast<T>(d);
    } else {
      return v.get<T>();
    }
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    if (!root_[key].is_string()) {
      errors_.push_back("field '" + key + "' must be a string");
      return std::nullopt;
    }
    return root_[key].get<std::string>();
  }

  std::optional<double> real_token(const Json& v, const std::string& where) {
    try {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return static_cast<double>(parse_rational_token(v.get<std::string>()));
    } catch (const std::exception& e) {
      errors_.push_back(where + ": " + e.what());
      return std::nullopt;
    }
    errors_.push_back(where + ": expected a number");
    return std::nullopt;
  }

  std::optional<std::vector<double>> real_list(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = root_[key];
    if (v.is_number() || v.is_string()) {
      auto r = real_token(v, "field '" + key + "'");
      if (!r) return std::nullopt;
      return std::vector<double>{*r};
    }
    if (!v.is_array()) {
      errors_.push_back("field '" + key + "' must be a number or an array");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto r = real_token(v[i], "field '" + key + "[" + std::to_string(i) + "]'");
      if (!r) return std::nullopt;
      out.push_back(*r);
    }
    return out;
  }

  std::optional<RationalPolyCurve> curve(const std::string& key, std::size_t rows_per_n = 0,
                                         std::size_t* heis_n = nullptr) {
    if (!has(key)) return std::nullopt;
    const auto& v = root_[key];
    try {
      if (v.is_string()) {
        if (rows_per_n == 0) return parse_rational_curve(v.get<std::string>());
        errors_.push_back("field '" + key + "' must be an object {n, d, coeffs}");
        return std::nullopt;
      }
      if (!v.is_object() || !v.contains("n") || !v.contains("d") || !v.contains("coeffs") ||
          !v["n"].is_number_integer() || !v["d"].is_number_integer() || !v["coeffs"].is_array()) {
        errors_.push_back("field '" + key + "' must be a string or an object {n, d, coeffs}");
        return std::nullopt;
      }
      const auto n = v["n"].get<long long>();
      const auto d = v["d"].get<long long>();
      if (n <= 0 || d <= 0) {
        errors_.push_back("field '" + key + "': n and d must be positive");
        return std::nullopt;
      }
      std::vector<Rational> coeffs;
      for (const auto& c : v["coeffs"]) {
        if (c.is_string()) coeffs.push_back(parse_rational_token(c.get<std::string>()));
        else if (c.is_number_integer()) coeffs.push_back(Rational(c.get<long long>()));
        else if (c.is_number()) coeffs.push_back(parse_rational_token(c.dump()));
        else throw DomainError("coefficient must be a number or a string");
      }
      std::size_t rows = static_cast<std::size_t>(n);
      if (rows_per_n) {
        rows = 2 * static_cast<std::size_t>(n) + 1;
        if (heis_n) *heis_n = static_cast<std::size_t>(n);
      }
      return RationalPolyCurve(rows, static_cast<std::size_t>(d), std::move(coeffs));
    } catch (const std::exception& e) {
      errors_.push_back("field '" + key + "': " + e.what());
      return std::nullopt;
    }
  }

  const Json& root() const { return root_; }

 private:
  const Json& root_;
  std::vector<std::string>& errors_;
};

std::vector<double> default_lambdas(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::torus_decay: return log_spaced(10.0, 1e4, 8);
    case ExperimentKind::nil_equi: return {1e2, 1e3, 1e4};
    case ExperimentKind::mean_ergodic: return log_spaced(10.0, 1e4, 20);
    case ExperimentKind::dilation_threshold: return log_spaced(1.0, 1e4, 13);
    default: return {};
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kind_table())
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& text) {
  for (const auto& [k, name] : kind_table())
    if (name == text) return k;
  return std::nullopt;
}

const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kind_table()) v.push_back(e.second);
    return v;
  }();
  return names;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["kind"] = to_string(kind);
  if (curve) j["curve"] = curve_text(*curve);
  if (heis_rows) {
    Json h;
    h["n"] = heis_n;
    h["d"] = heis_rows->degree();
    Json coeffs = Json::array();
    for (const auto& c : heis_rows->coeffs()) coeffs.push_back(rational_text(c));
    h["coeffs"] = std::move(coeffs);
    j["heis_curve"] = std::move(h);
  }
  if (!x.empty()) j["x"] = eqdist::to_json(x);
  if (!lambdas.empty()) j["lambdas"] = eqdist::to_json(lambdas);
  if (!eps.empty()) j["eps"] = eqdist::to_json(eps);
  j["tol"] = tol;
  j["nu_box"] = nu_box;
  j["c"] = c;
  j["q"] = q;
  j["cutoff"] = cutoff;
  j["norm"] = to_string(norm);
  j["max_iter"] = max_iter;
  j["samples"] = samples;
  j["probe_samples"] = probe_samples;
  j["points"] = points;
  j["step"] = step;
  if (!specs.empty()) {
    Json s = Json::array();
    for (const auto& sp : specs) {
      std::string id = spec_id(sp);
      if (const auto* o = std::get_if<Oscillator>(&sp)) id += ",K=" + std::to_string(o->K);
      s.push_back(id);
    }
    j["specs"] = std::move(s);
  }
  if (!measure.atoms().empty()) {
    Json atoms = Json::array();
    for (const auto& a : measure.atoms()) {
      Json e;
      e["y"] = eqdist::to_json(a.y);
      e["w"] = a.weight;
      atoms.push_back(std::move(e));
    }
    j["atoms"] = std::move(atoms);
  }
  j["seed"] = seed;
  j["threads"] = threads;
  j["out"] = out_dir;
  return j;
}

ConfigParseResult parse_config(const std::string& text, std::optional<ExperimentKind> kind_override) {
  ConfigParseResult res;
  auto& errors = res.errors;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    errors.push_back(std::string("config is not valid JSON: ") + e.what());
    return res;
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
  if (!doc.is_object()) {
    errors.push_back("config must be a JSON object");
    return res;
  }

  ExperimentConfig cfg;
  for (const auto& [key, _] : doc.items())
    if (!kKnownKeys.count(key)) errors.push_back("unknown field '" + key + "'");

  Reader rd(doc, errors);
  if (kind_override) {
    cfg.kind = *kind_override;
    if (auto k = rd.string("kind"); k && *k != to_string(*kind_override))
      cfg.warnings.push_back("config kind '" + *k + "' overridden by subcommand '" + to_string(*kind_override) + "'");
  } else if (auto k = rd.string("kind")) {
    if (auto pk = parse_kind(*k)) cfg.kind = *pk;
    else {
      errors.push_back("unknown experiment kind '" + *k + "'");
      return res;
    }
  } else {
    errors.push_back("missing required field 'kind'");
    return res;
  }

  cfg.curve = rd.curve("curve");
  cfg.heis_rows = rd.curve("heis_curve", 1, &cfg.heis_n);
  if (auto v = rd.real_list("x")) cfg.x = *v;
  if (rd.has("lambdas") && rd.root()["lambdas"].is_object()) {
    const auto& g = rd.root()["lambdas"];
    if (!g.contains("from") || !g.contains("to") || !g.contains("points") || !g["from"].is_number() ||
        !g["to"].is_number() || !g["points"].is_number_integer()) {
      errors.push_back("field 'lambdas' as an object needs numeric from, to and integer points");
    } else if (!(g["from"].get<double>() > 0.0) || !(g["to"].get<double>() >= g["from"].get<double>()) ||
               g["points"].get<long long>() < 1) {
      errors.push_back("field 'lambdas': need 0 < from <= to and points >= 1");
    } else {
      cfg.lambdas = log_spaced(g["from"].get<double>(), g["to"].get<double>(),
                               static_cast<std::size_t>(g["points"].get<long long>()));
    }
  } else if (auto v = rd.real_list("lambdas")) {
    cfg.lambdas = *v;
  } else if (auto v1 = rd.real_list("lambda")) {
    cfg.lambdas = *v1;
  }
  if (auto v = rd.real_list("eps")) cfg.eps = *v;
  if (auto v = rd.number<double>("tol")) cfg.tol = *v;
  if (auto v = rd.number<int>("nu_box")) cfg.nu_box = *v;
  if (auto v = rd.number<double>("c")) cfg.c = *v;
  if (auto v = rd.number<double>("q")) cfg.q = *v;
  if (auto v = rd.number<std::int64_t>("cutoff")) cfg.cutoff = *v;
  if (auto v = rd.string("norm")) {
    try {
      cfg.norm = parse_norm(*v);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  if (auto v = rd.number<double>("max_iter")) {
    if (*v < 1 || std::floor(*v) != *v) errors.push_back("field 'max_iter' must be a positive integer");
    else cfg.max_iter = static_cast<std::uint64_t>(*v);
  }
  if (auto v = rd.number<long long>("samples")) {
    if (*v < 0) errors.push_back("field 'samples' must be nonnegative");
    else cfg.samples = static_cast<std::size_t>(*v);
  }
  if (auto v = rd.number<long long>("probe_samples")) {
    if (*v < 1) errors.push_back("field 'probe_samples' must be >= 1");
    else cfg.probe_samples = static_cast<std::size_t>(*v);
  }
  if (auto v = rd.number<long long>("points")) {
    if (*v < 1) errors.push_back("field 'points' must be >= 1");
    else cfg.points = static_cast<std::size_t>(*v);
  }
  if (auto v = rd.number<double>("step")) cfg.step = *v;
  if (auto v = rd.number<long long>("seed")) cfg.seed = static_cast<std::uint64_t>(*v);
  if (auto v = rd.number<long long>("threads")) {
    if (*v < 1) errors.push_back("field 'threads' must be >= 1");
    else cfg.threads = static_cast<unsigned>(*v);
  }
  if (auto v = rd.string("out")) cfg.out_dir = *v;

  if (rd.has("specs")) {
    const auto& s = rd.root()["specs"];
    if (!s.is_array()) {
      errors.push_back("field 'specs' must be an array of strings");
    } else {
      for (const auto& e : s) {
        if (!e.is_string()) {
          errors.push_back("field 'specs' must contain strings");
          continue;
        }
        try {
          cfg.specs.push_back(parse_spec(e.get<std::string>()));
        } catch (const std::exception& ex) {
          errors.push_back(ex.what());
        }
      }
    }
  }

  if (rd.has("atoms")) {
    const auto& a = rd.root()["atoms"];
    if (!a.is_array()) errors.push_back("field 'atoms' must be an array of {y, w}");
    else {
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& e = a[i];
        const std::string where = "atoms[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("y") || !e.contains("w")) {
          errors.push_back(where + " must be an object {y, w}");
          continue;
        }
        Atom atom;
        const auto& y = e["y"];
        bool ok = true;
        if (y.is_array()) {
          for (const auto& c : y) {
            auto r = rd.real_token(c, where + ".y");
            if (!r) ok = false;
            else atom.y.push_back(*r);
          }
        } else if (auto r = rd.real_token(y, where + ".y")) {
          atom.y.push_back(*r);
        } else {
          ok = false;
        }
        auto w = rd.real_token(e["w"], where + ".w");
        if (!ok || !w) continue;
        atom.weight = *w;
        try {
          cfg.measure.add(std::move(atom));
        } catch (const std::exception& ex) {
          errors.push_back(where + ": " + ex.what());
        }
      }
    }
  }
  if (rd.has("uniform_box")) {
    const auto& b = rd.root()["uniform_box"];
    try {
      auto box = AtomicSpectralMeasure::uniform_box(b.at("lo").get<RealVec>(), b.at("hi").get<RealVec>(),
                                                    b.at("mass").get<double>(), b.value("nodes", std::size_t{8}));
      for (const auto& atom : box.atoms()) cfg.measure.add(atom);
    } catch (const std::exception& e) {
      errors.push_back(std::string("field 'uniform_box': ") + e.what());
    }
  }

  // Numeric sanity.
  if (!(cfg.tol > 0.0)) errors.push_back("field 'tol' must be positive");
  if (!(cfg.step > 0.0)) errors.push_back("field 'step' must be positive");
  if (!(cfg.c > 0.0)) errors.push_back("field 'c' must be positive");
  if (!(cfg.q > 0.0)) errors.push_back("field 'q' must be positive");
  if (cfg.cutoff < 1) errors.push_back("field 'cutoff' must be >= 1");
  if (cfg.nu_box < 1) errors.push_back("field 'nu_box' must be >= 1");
  for (double l : cfg.lambdas)
    if (!(l > 0.0)) {
      errors.push_back("lambda values must be positive");
      break;
    }
  for (double e : cfg.eps)
    if (!(e > 0.0 && e < 0.5)) {
      errors.push_back("eps values must lie in (0, 1/2)");
      break;
    }

  // Kind-specific requirements.
  auto require = [&](bool present, const std::string& field) {
    if (!present) errors.push_back("missing required field '" + field + "' for " + to_string(cfg.kind));
  };
  using K = ExperimentKind;
  switch (cfg.kind) {
    case K::torus_decay:
    case K::dichotomy: require(cfg.curve.has_value(), "curve"); break;
    case K::density:
      require(cfg.curve.has_value(), "curve");
      require(!cfg.lambdas.empty(), "lambda");
      require(!cfg.eps.empty(), "eps");
      break;
    case K::bap_check: require(!cfg.x.empty(), "x"); break;
    case K::t_threshold:
      require(!cfg.x.empty(), "x");
      require(!cfg.eps.empty(), "eps");
      break;
    case K::dilation_threshold:
      require(cfg.curve.has_value(), "curve");
      require(!cfg.eps.empty(), "eps");
      break;
    case K::heis_eig: require(!cfg.specs.empty(), "specs"); break;
    case K::nil_equi: require(cfg.heis_rows.has_value(), "heis_curve"); break;
    case K::mean_ergodic:
      require(cfg.curve.has_value(), "curve");
      require(!cfg.measure.atoms().empty(), "atoms");
      break;
  }
  if (cfg.kind == K::mean_ergodic && cfg.curve && !cfg.measure.atoms().empty() &&
      cfg.measure.dim() != cfg.curve->dim())
    errors.push_back("atom dimension differs from the curve dimension");
  if (cfg.kind == K::nil_equi && cfg.heis_rows)
    for (const auto& s : cfg.specs)
      if (spec_dim(s) != cfg.heis_n) errors.push_back("spec " + spec_id(s) + " does not match heis_curve n");
  if (cfg.kind == K::heis_eig && !cfg.specs.empty())
    for (const auto& s : cfg.specs)
      if (spec_dim(s) != spec_dim(cfg.specs.front())) errors.push_back("heis-eig specs must share one dimension");

  if (!rd.has("cutoff")) {
    std::size_t dim = cfg.x.size();
    if (cfg.kind == K::dilation_threshold && cfg.curve) dim = cfg.curve->dim();
    cfg.cutoff = dim <= 1 ? 100000 : dim == 2 ? 1000 : 100;
  }
  if (cfg.lambdas.empty()) cfg.lambdas = default_lambdas(cfg.kind);
  if (!std::is_sorted(cfg.lambdas.begin(), cfg.lambdas.end())) {
    std::sort(cfg.lambdas.begin(), cfg.lambdas.end());
    cfg.warnings.push_back("lambda grid was not ascending; sorted");
  }
  if (std::adjacent_find(cfg.lambdas.begin(), cfg.lambdas.end()) != cfg.lambdas.end()) {
    cfg.lambdas.erase(std::unique(cfg.lambdas.begin(), cfg.lambdas.end()), cfg.lambdas.end());
    cfg.warnings.push_back("duplicate lambda values removed");
  }
  if ((cfg.kind == K::mean_ergodic) && cfg.lambdas.size() < 3)
    errors.push_back("mean-ergodic needs at least three lambda values");

  if (errors.empty()) res.config = std::move(cfg);
  return res;
}

}  // namespace eqdist
