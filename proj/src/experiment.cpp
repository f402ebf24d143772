#include "iemo/experiment.hpp"

#include "iemo/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace iemo {

using nlohmann::json;

std::vector<std::uint64_t> default_seeds(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = i + 1;
  return seeds;
}

namespace {

bool valid_arm_name(const std::string& name) {
  return !name.empty() && name.find_first_of(",\"\n\r") == std::string::npos;
}

std::string path_component(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' || c == '=')) c = '_';
  }
  return out;
}

std::string baseline_name(const std::string& name) { return name + "-baseline"; }

}  // namespace

ExperimentPlan plan_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError(std::vector<FieldError>{{"$", "plan must be a JSON object"}});
  std::vector<FieldError> errors;
  ExperimentPlan plan;

  RunConfig base;
  try {
    base = config_from_json(doc.value("base", json::object()));
  } catch (const ConfigError& e) {
    for (const auto& fe : e.errors()) errors.push_back({"base." + fe.field, fe.message});
    throw ConfigError(std::move(errors));
  }

  if (doc.contains("arms")) {
    const json& arms = doc.at("arms");
    if (!arms.is_array() || arms.empty()) {
      errors.push_back({"arms", "expected a non-empty array"});
    } else {
      for (std::size_t i = 0; i < arms.size(); ++i) {
        const std::string where = "arms[" + std::to_string(i) + "]";
        const json& a = arms[i];
        if (!a.is_object() || !a.contains("name") || !a.at("name").is_string()) {
          errors.push_back({where + ".name", "expected a string"});
          continue;
        }
        Arm arm;
        arm.name = a.at("name").get<std::string>();
        if (!valid_arm_name(arm.name)) {
          errors.push_back({where + ".name", "must be non-empty and free of commas, quotes and newlines"});
          continue;
        }
        const bool duplicate = std::any_of(plan.arms.begin(), plan.arms.end(),
                                           [&](const Arm& other) { return other.name == arm.name; });
        if (duplicate) errors.push_back({where + ".name", "duplicate arm name '" + arm.name + "'"});
        try {
          arm.config = apply_overrides(base, a.value("config", json::object()));
          plan.arms.push_back(std::move(arm));
        } catch (const ConfigError& e) {
          for (const auto& fe : e.errors()) errors.push_back({where + ".config." + fe.field, fe.message});
        }
      }
    }
  } else {
    const std::string name = std::string(to_string(base.algorithm)) + (base.interactive ? "-interactive" : "");
    plan.arms.push_back({name, base});
    if (base.interactive) {
      RunConfig baseline = base;
      baseline.interactive = false;
      plan.arms.push_back({baseline_name(std::string(to_string(base.algorithm))), baseline});
    }
  }

  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    if (!s.is_array() || s.empty()) {
      errors.push_back({"seeds", "expected a non-empty array of non-negative integers"});
    } else {
      for (const auto& v : s) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          errors.push_back({"seeds", "expected a non-empty array of non-negative integers"});
          break;
        }
        plan.seeds.push_back(v.get<std::uint64_t>());
      }
      auto sorted = plan.seeds;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        errors.push_back({"seeds", "seeds must be distinct"});
    }
  } else {
    std::size_t replicates = 21;
    if (doc.contains("replicates")) {
      if (!doc.at("replicates").is_number_integer() || doc.at("replicates").get<std::int64_t>() < 1)
        errors.push_back({"replicates", "expected a positive integer"});
      else
        replicates = doc.at("replicates").get<std::size_t>();
    }
    plan.seeds = default_seeds(replicates);
  }

  if (doc.contains("threads")) {
    if (!doc.at("threads").is_number_integer() || doc.at("threads").get<std::int64_t>() < 0) errors.push_back({"threads", "expected a non-negative integer"});
    else plan.threads = doc.at("threads").get<std::size_t>();
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return plan;
}

std::vector<ArmSummary> summarize(const std::vector<RunRow>& rows) {
  std::vector<ArmSummary> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::vector<std::pair<std::uint64_t, double>>> samples;
  for (const auto& row : rows) {
    if (!index.count(row.arm)) {
      index[row.arm] = out.size();
      ArmSummary s;
      s.arm = row.arm;
      s.problem = row.problem;
      s.m = row.m;
      s.roi = row.roi;
      s.algorithm = row.algorithm;
      s.interactive = row.interactive;
      out.push_back(std::move(s));
    }
    samples[row.arm].emplace_back(row.seed, row.final_error);
  }

  for (auto& s : out) {
    auto& sample = samples[s.arm];
    std::sort(sample.begin(), sample.end());
    for (const auto& [seed, error] : sample) {
      s.seeds.push_back(seed);
      s.errors.push_back(error);
    }
    s.median = stats::median(s.errors);
    s.iqr = stats::iqr(s.errors);
  }

  for (auto& s : out) {
    if (!s.interactive) continue;
    const auto match = std::find_if(out.begin(), out.end(), [&](const ArmSummary& b) {
      return !b.interactive && b.problem == s.problem && b.m == s.m && b.roi == s.roi && b.algorithm == s.algorithm;
    });
    if (match == out.end()) continue;
    // Pair replicates by seed; seeds missing from either arm are left out.
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < s.seeds.size(); ++i) {
      const auto it = std::find(match->seeds.begin(), match->seeds.end(), s.seeds[i]);
      if (it == match->seeds.end()) continue;
      a.push_back(s.errors[i]);
      b.push_back(match->errors[static_cast<std::size_t>(it - match->seeds.begin())]);
    }
    if (a.empty()) continue;
    s.baseline = match->arm;
    s.p_value = stats::wilcoxon_signed_rank(a, b);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  struct Job {
    std::size_t arm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < plan.arms.size(); ++a) {
    for (auto seed : plan.seeds) jobs.push_back({a, seed});
  }

  ExperimentResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      RunConfig config = plan.arms[jobs[j].arm].config;
      config.seed = jobs[j].seed;
      result.runs[j] = run_single(config);
    }
  };

  std::size_t threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
  threads = std::min(threads, std::max<std::size_t>(jobs.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& run = result.runs[j];
    const auto& c = run.config;
    result.rows.push_back(RunRow{plan.arms[jobs[j].arm].name, std::string(to_string(c.problem.id)), c.problem.m,
                                 std::string(to_string(c.golden.roi)), std::string(to_string(c.algorithm)),
                                 c.interactive, c.seed, run.final_error(), run.evaluations, run.consultations});
  }
  result.summary = summarize(result.rows);
  return result;
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  if (name == "mu") return SweepParam::mu;
  if (name == "tau") return SweepParam::tau;
  if (name == "eta") return SweepParam::eta;
  if (name == "kappa") return SweepParam::kappa;
  return std::nullopt;
}

std::string_view to_string(SweepParam param) {
  switch (param) {
    case SweepParam::mu: return "mu";
    case SweepParam::tau: return "tau";
    case SweepParam::eta: return "eta";
    case SweepParam::kappa: return "kappa";
  }
  return "";
}

ExperimentPlan sweep_plan(SweepParam param, const std::vector<std::string>& values, const RunConfig& base,
                          std::vector<std::uint64_t> seeds) {
  if (values.empty()) throw ConfigError(std::vector<FieldError>{{"values", "at least one value is required"}});
  ExperimentPlan plan;
  plan.seeds = std::move(seeds);
  std::vector<FieldError> errors;
  for (const auto& value : values) {
    const std::string name = std::string(to_string(param)) + "=" + value;
    json overrides;
    if (param == SweepParam::mu && value == "utopia") {
      overrides["value_source"] = "golden";
    } else {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        errors.push_back({name, "not a number"});
        continue;
      }
      if (!parsed.is_number()) {
        errors.push_back({name, "not a number"});
        continue;
      }
      switch (param) {
        case SweepParam::mu: overrides["schedule"] = {{"mu_first", parsed}, {"mu_later", parsed}}; break;
        case SweepParam::tau: overrides["schedule"] = {{"tau", parsed}}; break;
        case SweepParam::eta: overrides["eta"] = parsed; break;
        case SweepParam::kappa: overrides["noise"] = {{"kappa", parsed}}; break;
      }
    }
    try {
      plan.arms.push_back({name, apply_overrides(base, overrides)});
    } catch (const ConfigError& e) {
      for (const auto& fe : e.errors()) errors.push_back({name + ": " + fe.field, fe.message});
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return plan;
}

namespace {

constexpr const char* kRunsHeader = "arm,problem,m,roi,algorithm,interactive,seed,final_error,evaluations,consultations";

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

json summary_to_json(const std::vector<ArmSummary>& summary) {
  json arms = json::array();
  for (const auto& s : summary) {
    arms.push_back({
        {"arm", s.arm},
        {"problem", s.problem},
        {"m", s.m},
        {"roi", s.roi},
        {"algorithm", s.algorithm},
        {"interactive", s.interactive},
        {"replicates", s.errors.size()},
        {"seeds", s.seeds},
        {"errors", s.errors},
        {"median", s.median},
        {"iqr", s.iqr},
        {"baseline", s.baseline ? json(*s.baseline) : json(nullptr)},
        {"p_value", s.p_value ? json(*s.p_value) : json(nullptr)},
    });
  }
  return json{{"arms", arms}};
}

void write_summary(const std::filesystem::path& dir, const std::vector<ArmSummary>& summary) {
  std::filesystem::create_directories(dir);
  auto csv = open_for_write(dir / "summary.csv");
  csv << "arm,problem,m,roi,algorithm,interactive,replicates,median,iqr,baseline,p_value\n";
  for (const auto& s : summary) {
    csv << s.arm << ',' << s.problem << ',' << s.m << ',' << s.roi << ',' << s.algorithm << ','
        << (s.interactive ? "true" : "false") << ',' << s.errors.size() << ',' << s.median << ',' << s.iqr << ','
        << s.baseline.value_or("") << ',';
    if (s.p_value) csv << *s.p_value;
    csv << '\n';
  }
  auto js = open_for_write(dir / "summary.json");
  js << summary_to_json(summary).dump(2) << '\n';
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result, bool per_run) {
  std::filesystem::create_directories(dir);
  auto csv = open_for_write(dir / "runs.csv");
  csv << kRunsHeader << '\n';
  for (const auto& r : result.rows) {
    csv << r.arm << ',' << r.problem << ',' << r.m << ',' << r.roi << ',' << r.algorithm << ','
        << (r.interactive ? "true" : "false") << ',' << r.seed << ',' << r.final_error << ',' << r.evaluations << ','
        << r.consultations << '\n';
  }
  if (per_run) {
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto sub = dir / "runs" / path_component(result.rows[i].arm);
      std::filesystem::create_directories(sub);
      auto out = open_for_write(sub / ("seed-" + std::to_string(result.rows[i].seed) + ".json"));
      json doc = result_to_json(result.runs[i]);
      doc["arm"] = result.rows[i].arm;
      out << doc.dump() << '\n';
    }
  }
  write_summary(dir, result.summary);
}

std::vector<RunRow> read_runs(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot read " + csv.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunsHeader)
    throw std::runtime_error(csv.string() + ": unexpected header");
  std::vector<RunRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    const auto bad = [&] { return std::runtime_error(csv.string() + ":" + std::to_string(line_no) + ": malformed row"); };
    if (cells.size() != 10) throw bad();
    try {
      RunRow r;
      r.arm = cells[0];
      r.problem = cells[1];
      r.m = std::stoul(cells[2]);
      r.roi = cells[3];
      r.algorithm = cells[4];
      if (cells[5] != "true" && cells[5] != "false") throw bad();
      r.interactive = cells[5] == "true";
      r.seed = std::stoull(cells[6]);
      r.final_error = std::stod(cells[7]);
      r.evaluations = std::stoul(cells[8]);
      r.consultations = std::stoul(cells[9]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  return rows;
}

void print_summary(std::ostream& out, const std::vector<ArmSummary>& summary) {
  const auto flags = out.flags();
  out << std::left << std::setw(28) << "arm" << std::setw(8) << "n" << std::setw(14) << "median" << std::setw(14)
      << "iqr" << "p (vs baseline)\n";
  for (const auto& s : summary) {
    out << std::left << std::setw(28) << s.arm << std::setw(8) << s.errors.size() << std::setw(14)
        << std::setprecision(6) << s.median << std::setw(14) << s.iqr;
    if (s.p_value) out << std::setprecision(4) << *s.p_value << " (" << *s.baseline << ")";
    out << '\n';
  }
  out.flags(flags);
}

}  // namespace iemo
