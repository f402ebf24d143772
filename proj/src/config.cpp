#include "iemo/config.hpp"

#include "iemo/refpoints.hpp"

#include <cmath>
#include <cstdlib>

namespace iemo {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) { return algorithm == Algorithm::moead ? "moead" : "nsga3"; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "moead") return Algorithm::moead;
  if (name == "nsga3") return Algorithm::nsga3;
  return std::nullopt;
}

LatticeSpec LatticeSpec::default_for(std::size_t m) {
  switch (m) {
    case 3:
      return {12, 0};
    case 5:
      return {6, 0};
    case 8:
    case 10:
      return {3, 2};
    default:
      break;
  }
  std::size_t h = 1;
  while (lattice_size(m, h + 1) != 0 && lattice_size(m, h + 1) <= 300) ++h;
  return {h, 0};
}

std::vector<Weights> LatticeSpec::build(std::size_t m) const {
  return h2 > 0 ? two_layer(m, h1, h2) : das_dennis(m, h1);
}

std::size_t default_generations(ProblemId id, std::size_t m) {
  static constexpr std::size_t table[4][4] = {
      {400, 600, 750, 1000},    // DTLZ1
      {250, 350, 500, 750},     // DTLZ2
      {1000, 1000, 1000, 1500}, // DTLZ3
      {600, 1000, 1250, 2000},  // DTLZ4
  };
  static constexpr std::size_t columns[4] = {3, 5, 8, 10};
  std::size_t col = 0;
  for (std::size_t c = 1; c < 4; ++c) {
    const auto dist = [&](std::size_t k) { return k > m ? k - m : m - k; };
    if (dist(columns[c]) < dist(columns[col])) col = c;
  }
  return table[static_cast<std::size_t>(id)][col];
}

std::size_t default_population(Algorithm algorithm, std::size_t references) {
  return algorithm == Algorithm::moead ? references : (references + 3) / 4 * 4;
}

RunConfig RunConfig::defaults(ProblemId id, std::size_t m, Algorithm algorithm, Roi roi) {
  RunConfig c;
  c.problem = ProblemSpec::make(id, m);
  c.algorithm = algorithm;
  c.golden = GoldenSpec::for_roi(m, roi);
  c.lattice = LatticeSpec::default_for(m);
  c.population = default_population(algorithm, c.lattice.build(m).size());
  c.generations = default_generations(id, m);
  c.schedule.mu_first = 2 * m + 1;
  return c;
}

namespace {

std::string join(const std::vector<FieldError>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += " " + e.field + ": " + e.message + ";";
  return out;
}

/// Reads typed fields out of a JSON object and collects every problem.
class Reader {
 public:
  explicit Reader(std::vector<FieldError>& errors) : errors_(errors) {}

  static const json* find(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) return nullptr;
    const json& v = obj.at(key);
    return v.is_null() ? nullptr : &v;
  }

  template <typename T>
  void number(const json& obj, const char* key, const std::string& path, T& out) {
    const json* v = find(obj, key);
    if (!v) return;
    if (!v->is_number()) return fail(path, "expected a number");
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer() || v->get<double>() < 0) return fail(path, "expected a non-negative integer");
      out = v->get<T>();
    } else {
      out = v->get<T>();
      if (!std::isfinite(out)) return fail(path, "must be finite");
    }
  }

  void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
    const json* v = find(obj, key);
    if (!v) return;
    if (!v->is_boolean()) return fail(path, "expected true or false");
    out = v->get<bool>();
  }

  template <typename Enum, typename Parse>
  void choice(const json& obj, const char* key, const std::string& path, Enum& out, Parse parse, const char* allowed) {
    const json* v = find(obj, key);
    if (!v) return;
    if (!v->is_string()) return fail(path, std::string("expected one of ") + allowed);
    auto parsed = parse(v->get<std::string>());
    if (!parsed) return fail(path, "unknown value '" + v->get<std::string>() + "', expected one of " + allowed);
    out = *parsed;
  }

  void fail(const std::string& path, std::string message) { errors_.push_back({path, std::move(message)}); }

 private:
  std::vector<FieldError>& errors_;
};

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.is_object() && doc.contains(key) && doc.at(key).is_object() ? doc.at(key) : empty;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors) : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

RunConfig config_from_json(const json& doc) {
  std::vector<FieldError> errors;
  Reader r(errors);
  if (!doc.is_object()) throw ConfigError(std::vector<FieldError>{{"$", "configuration must be a JSON object"}});

  ProblemId id = ProblemId::dtlz2;
  std::size_t m = 3;
  Algorithm algorithm = Algorithm::moead;
  Roi roi = Roi::center;
  r.choice(doc, "problem", "problem", id, parse_problem_id, "DTLZ1, DTLZ2, DTLZ3, DTLZ4");
  r.number(doc, "m", "m", m);
  r.choice(doc, "algorithm", "algorithm", algorithm, parse_algorithm, "moead, nsga3");
  const json& golden = section(doc, "golden");
  r.choice(golden, "roi", "golden.roi", roi, parse_roi, "center, boundary");
  if (m < ProblemSpec::min_objectives || m > ProblemSpec::max_objectives) {
    r.fail("m", "must be between 2 and 15");
    m = 3;
  }
  // With a broken instance the remaining fields are still checked, against
  // stand-in defaults; checks that depend on the instance are skipped.
  const bool instance_ok = errors.empty();

  RunConfig c = RunConfig::defaults(id, m, algorithm, roi);
  r.number(doc, "n", "n", c.problem.n);
  r.number(doc, "alpha", "alpha", c.problem.alpha);
  if (instance_ok && c.problem.n < m) r.fail("n", "must be at least m");

  if (instance_ok && golden.contains("weights") && !golden.at("weights").is_null()) {
    const json& w = golden.at("weights");
    if (!w.is_array() || w.size() != m) {
      r.fail("golden.weights", "expected an array of " + std::to_string(m) + " positive numbers");
    } else {
      Weights values;
      bool ok = true;
      for (const auto& v : w) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) ok = false;
        else values.push_back(v.get<double>());
      }
      if (ok) c.golden = GoldenSpec::with_weights(std::move(values), roi);
      else r.fail("golden.weights", "every weight must be strictly positive");
    }
  }

  r.boolean(doc, "interactive", "interactive", c.interactive);
  r.number(section(doc, "noise"), "kappa", "noise.kappa", c.kappa);

  const json& sched = section(doc, "schedule");
  r.number(sched, "tau", "schedule.tau", c.schedule.tau);
  r.number(sched, "mu_first", "schedule.mu_first", c.schedule.mu_first);
  r.number(sched, "mu_later", "schedule.mu_later", c.schedule.mu_later);

  const json& var = section(doc, "variation");
  r.number(var, "p_c", "variation.p_c", c.variation.p_c);
  r.number(var, "eta_c", "variation.eta_c", c.variation.eta_c);
  r.number(var, "p_m", "variation.p_m", c.variation.p_m);
  r.number(var, "eta_m", "variation.eta_m", c.variation.eta_m);
  r.choice(var, "mutation_gate", "variation.mutation_gate", c.variation.gate, parse_mutation_gate,
           "per_solution, per_variable");

  const json& mo = section(doc, "moead");
  r.number(mo, "T", "moead.T", c.moead.T);
  r.number(mo, "delta", "moead.delta", c.moead.delta);
  r.number(mo, "nr", "moead.nr", c.moead.nr);

  const json& lat = section(doc, "lattice");
  const bool lattice_given = lat.contains("h1") || lat.contains("h2");
  r.number(lat, "h1", "lattice.h1", c.lattice.h1);
  r.number(lat, "h2", "lattice.h2", c.lattice.h2);

  r.number(doc, "eta", "eta", c.eta);
  r.number(doc, "generations", "generations", c.generations);
  r.number(doc, "seed", "seed", c.seed);
  r.choice(doc, "kernel", "kernel", c.kernel, parse_kernel_shape, "literal, squared");
  r.choice(doc, "guard", "guard", c.guard, parse_guard_mode, "literal, rescored");
  r.choice(
      doc, "value_source", "value_source", c.value_source,
      [](std::string_view s) -> std::optional<ValueSource> {
        if (s == "learned") return ValueSource::learned;
        if (s == "golden") return ValueSource::golden;
        return std::nullopt;
      },
      "learned, golden");
  r.choice(
      doc, "oracle", "oracle", c.oracle,
      [](std::string_view s) -> std::optional<OracleKind> {
        if (s == "simulated") return OracleKind::simulated;
        if (s == "human") return OracleKind::human;
        return std::nullopt;
      },
      "simulated, human");

  std::size_t references = 0;
  if (instance_ok && c.lattice.h1 < 1) {
    r.fail("lattice.h1", "must be at least 1");
  } else if (instance_ok) {
    try {
      references = c.lattice.build(m).size();
    } catch (const std::invalid_argument& e) {
      r.fail("lattice", e.what());
    }
  }
  if (lattice_given && references > 0) c.population = default_population(algorithm, references);
  r.number(doc, "population", "population", c.population);

  auto probability = [&](double v, const char* path) {
    if (!(v >= 0.0 && v <= 1.0)) r.fail(path, "must be within [0, 1]");
  };
  probability(c.variation.p_c, "variation.p_c");
  probability(c.variation.p_m, "variation.p_m");
  probability(c.moead.delta, "moead.delta");
  probability(c.eta, "eta");
  if (!(c.variation.eta_c > 0.0)) r.fail("variation.eta_c", "must be positive");
  if (!(c.variation.eta_m > 0.0)) r.fail("variation.eta_m", "must be positive");
  if (c.schedule.tau < 2) r.fail("schedule.tau", "must be greater than 1");
  if (c.schedule.mu_first < 1) r.fail("schedule.mu_first", "must be at least 1");
  if (c.schedule.mu_later < 1) r.fail("schedule.mu_later", "must be at least 1");
  if (c.kappa < 0.0) r.fail("noise.kappa", "must be non-negative");
  if (c.generations < 1) r.fail("generations", "must be at least 1");
  if (references > 0) {
    if (algorithm == Algorithm::moead && c.population != references)
      r.fail("population", "MOEA/D needs one member per reference point (" + std::to_string(references) + ")");
    if (c.population < 2) r.fail("population", "must be at least 2");
    if (algorithm == Algorithm::moead && (c.moead.T < 2 || c.moead.T > references))
      r.fail("moead.T", "must be between 2 and the number of reference points");
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

json config_to_json(const RunConfig& c) {
  return json{
      {"problem", to_string(c.problem.id)},
      {"m", c.problem.m},
      {"n", c.problem.n},
      {"alpha", c.problem.alpha},
      {"algorithm", to_string(c.algorithm)},
      {"interactive", c.interactive},
      {"golden", {{"roi", to_string(c.golden.roi)}, {"weights", c.golden.w_star}}},
      {"noise", {{"kappa", c.kappa}}},
      {"schedule", {{"tau", c.schedule.tau}, {"mu_first", c.schedule.mu_first}, {"mu_later", c.schedule.mu_later}}},
      {"variation",
       {{"p_c", c.variation.p_c},
        {"eta_c", c.variation.eta_c},
        {"p_m", c.variation.p_m},
        {"eta_m", c.variation.eta_m},
        {"mutation_gate", to_string(c.variation.gate)}}},
      {"moead", {{"T", c.moead.T}, {"delta", c.moead.delta}, {"nr", c.moead.nr}}},
      {"lattice", {{"h1", c.lattice.h1}, {"h2", c.lattice.h2}}},
      {"eta", c.eta},
      {"population", c.population},
      {"generations", c.generations},
      {"seed", c.seed},
      {"kernel", to_string(c.kernel)},
      {"guard", to_string(c.guard)},
      {"value_source", c.value_source == ValueSource::learned ? "learned" : "golden"},
      {"oracle", c.oracle == OracleKind::simulated ? "simulated" : "human"},
  };
}

RunConfig apply_overrides(const RunConfig& base, const json& overrides) {
  json doc = config_to_json(base);
  if (!overrides.is_object()) throw ConfigError(std::vector<FieldError>{{"$", "overrides must be a JSON object"}});
  // A different instance re-derives its table defaults unless they are given.
  const bool instance_changed = overrides.contains("problem") || overrides.contains("m") ||
                                overrides.contains("algorithm");
  if (instance_changed) {
    for (const char* key : {"n", "lattice", "population", "generations"}) doc.erase(key);
    doc["schedule"].erase("mu_first");
    doc["golden"].erase("weights");
  }
  if (overrides.contains("golden") && overrides["golden"].contains("roi")) doc["golden"].erase("weights");
  doc.merge_patch(overrides);
  return config_from_json(doc);
}

}  // namespace iemo
