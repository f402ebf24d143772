// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance                 all criteria
//   acceptance --only NAME     one criterion (see kCriteria)
//
// Exit status is 0 only when every selected criterion passes.

#include "iemo/experiment.hpp"
#include "iemo/http_service.hpp"
#include "iemo/nsga3.hpp"
#include "iemo/stats.hpp"
#include "oracles.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

using namespace iemo;
using nlohmann::json;

namespace {

// Pinned tolerances.
constexpr std::size_t kSeeds = 11;
constexpr double kDtlz2Ceiling = 0.05;
constexpr double kDtlz1Ceiling = 0.02;
constexpr double kGapRatio = 0.5;
constexpr double kAlpha = 0.05;
constexpr double kNoiseSlack = 0.10;
constexpr double kSimplexTol = 1e-12;
constexpr double kContractionTol = 1e-12;
constexpr double kResidualTol = 1e-6;
constexpr double kFrontTol = 1e-9;
constexpr double kPTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

std::size_t worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentResult run_arms(std::vector<Arm> arms) {
  ExperimentPlan plan;
  plan.arms = std::move(arms);
  plan.seeds = default_seeds(kSeeds);
  plan.threads = worker_threads();
  return run_experiment(plan);
}

const ArmSummary& arm(const ExperimentResult& r, const std::string& name) {
  for (const auto& s : r.summary)
    if (s.arm == name) return s;
  throw std::logic_error("no arm " + name);
}

// ---------------------------------------------------------------------------

Outcome lattice_counts() {
  Outcome o;
  const std::size_t got[4] = {das_dennis(3, 12).size(), das_dennis(5, 6).size(), two_layer(8, 3, 2).size(),
                              two_layer(10, 3, 2).size()};
  const std::size_t want[4] = {91, 210, 156, 275};
  const char* label[4] = {"m=3", "m=5", "m=8", "m=10"};
  for (int i = 0; i < 4; ++i) {
    o.detail << ' ' << label[i] << "->" << got[i];
    o.require(got[i] == want[i], std::string(label[i]) + " expected " + std::to_string(want[i]));
  }
  return o;
}

Outcome table3(ProblemId problem, Algorithm algorithm, double ceiling) {
  Outcome o;
  const auto interactive = RunConfig::defaults(problem, 3, algorithm);
  auto baseline = interactive;
  baseline.interactive = false;
  const auto r = run_arms({{"interactive", interactive}, {"baseline", baseline}});
  const auto& i = arm(r, "interactive");
  const auto& b = arm(r, "baseline");
  const double p = i.p_value.value_or(1.0);
  o.detail << " interactive median " << fmt(i.median) << ", baseline median " << fmt(b.median) << ", ratio "
           << fmt(i.median / b.median) << ", p " << fmt(p) << " (" << interactive.generations << " generations, "
           << kSeeds << " seeds)";
  o.require(i.median <= ceiling, "interactive median <= " + fmt(ceiling));
  o.require(i.median <= kGapRatio * b.median, "interactive median <= 1/2 baseline median");
  o.require(p < kAlpha, "Wilcoxon p < 0.05");
  return o;
}

Outcome utopia_ordering() {
  Outcome o;
  const auto base = RunConfig::defaults(ProblemId::dtlz2, 3);
  const auto plan = sweep_plan(SweepParam::mu, {"utopia", "5", "10", "20"}, base, default_seeds(kSeeds));
  const auto r = run_arms(plan.arms);
  const double utopia = arm(r, "mu=utopia").median;
  o.detail << " golden-value arm median " << fmt(utopia);
  for (const char* name : {"mu=5", "mu=10", "mu=20"}) {
    const double learned = arm(r, name).median;
    o.detail << ", " << name << ' ' << fmt(learned);
    o.require(utopia <= learned, std::string("golden arm <= ") + name);
  }
  return o;
}

Outcome noise_degradation() {
  Outcome o;
  const auto base = RunConfig::defaults(ProblemId::dtlz2, 3);
  const auto plan = sweep_plan(SweepParam::kappa, {"0.0", "0.1", "0.5"}, base, default_seeds(kSeeds));
  const auto r = run_arms(plan.arms);
  std::vector<double> medians;
  for (const char* name : {"kappa=0.0", "kappa=0.1", "kappa=0.5"}) {
    medians.push_back(arm(r, name).median);
    o.detail << ' ' << name << ' ' << fmt(medians.back());
  }
  int inversions = 0;
  for (std::size_t k = 1; k < medians.size(); ++k) {
    if (medians[k] >= medians[k - 1]) continue;
    ++inversions;
    o.require(medians[k - 1] - medians[k] <= kNoiseSlack * medians[k - 1], "inversion within 10% relative");
  }
  o.require(inversions <= 1, "at most one inversion");
  return o;
}

Outcome oracle_equivalences() {
  Outcome o;
  std::mt19937_64 rng(20240601);

  int sort_mismatch = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(trial) % 4;
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 300);
    std::uniform_int_distribution<int> level(0, trial % 2 == 0 ? 6 : 100000);
    std::vector<Objectives> pts(n, Objectives(m));
    for (auto& f : pts)
      for (auto& v : f) v = level(rng);
    if (nondominated_sort(pts).fronts != oracle::peel_fronts(pts)) ++sort_mismatch;
  }
  o.detail << " sort mismatches " << sort_mismatch << "/200;";
  o.require(sort_mismatch == 0, "non-dominated sort equals brute-force peeling");

  double worst_residual = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t size = 1 + static_cast<std::size_t>(trial) % 30;
    const std::size_t m = 2 + static_cast<std::size_t>(trial) % 4;
    std::vector<ScoredRecord> recs;
    for (std::size_t i = 0; i < size; ++i)
      recs.push_back({oracle::random_vector(m, rng), oracle::random_vector(1, rng, 0, 3)[0], 1});
    const auto model = train_avf(recs);  // default (literal) kernel
    for (const auto& r : recs) worst_residual = std::max(worst_residual, std::fabs(model(r.f) - r.score));
  }
  o.detail << " max RBF residual (default kernel) " << fmt(worst_residual) << ';';
  o.require(worst_residual < kResidualTol, "RBF training residual < 1e-6");

  double front_residual = 0.0, ray_spread = 0.0;
  for (auto id : {ProblemId::dtlz1, ProblemId::dtlz2, ProblemId::dtlz3, ProblemId::dtlz4}) {
    for (std::size_t m : {2u, 3u, 5u, 8u, 10u}) {
      for (int trial = 0; trial < 20; ++trial) {
        auto w = oracle::random_simplex_point(m, rng);
        for (auto& v : w) v = std::max(v, 1e-3);
        const auto golden = GoldenSpec::with_weights(w);
        const auto f = golden_point(ProblemSpec::make(id, m), golden);
        const double shape = id == ProblemId::dtlz1 ? std::accumulate(f.begin(), f.end(), 0.0) - 0.5
                                                    : std::sqrt(std::inner_product(f.begin(), f.end(), f.begin(), 0.0)) - 1.0;
        front_residual = std::max(front_residual, std::fabs(shape));
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = 0; i < m; ++i) {
          lo = std::min(lo, f[i] / golden.w_star[i]);
          hi = std::max(hi, f[i] / golden.w_star[i]);
        }
        ray_spread = std::max(ray_spread, hi - lo);
      }
    }
  }
  o.detail << " golden-point front residual " << fmt(front_residual) << ", ray spread " << fmt(ray_spread) << ';';
  o.require(front_residual < kFrontTol, "golden point on the front within 1e-9");
  o.require(ray_spread < kFrontTol, "f_i / w_i constant within 1e-9");

  double worst_p = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    // Every all-positive pattern of n distinct magnitudes has the same ranks;
    // vary the magnitudes to exercise the ranking anyway.
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = oracle::random_vector(n, rng, 0.01, 1.0);
      const std::vector<double> zero(n, 0.0);
      worst_p = std::max(worst_p, std::fabs(stats::wilcoxon_signed_rank(a, zero) - oracle::wilcoxon_enumerate(a)));
    }
  }
  const double p5 = stats::wilcoxon_signed_rank(std::vector<double>{1.0, 2, 3, 4, 5}, std::vector<double>{0.0, 0, 0, 0, 0});
  o.detail << " Wilcoxon max deviation " << fmt(worst_p) << ", n=5 p " << fmt(p5);
  o.require(worst_p <= kPTol, "Wilcoxon exact matches enumeration");
  o.require(std::fabs(p5 - 0.0625) <= kPTol, "n=5 all-positive p = 0.0625");
  return o;
}

// Recording oracle that also lets the invariant suite look at the reference
// set before and after every consultation.
struct Probe final : DmOracle {
  SimulatedOracle inner;
  std::function<void()> before;
  Probe(const RunConfig& c) : inner(c.golden, c.noise(), oracle_seed(c.seed)) {}
  std::vector<double> score(const ConsultationRequest& r) override {
    if (before) before();
    return inner.score(r);
  }
};

Outcome invariants() {
  Outcome o;
  double simplex_err = 0.0, contraction_err = 0.0;
  std::size_t moved_points = 0, unexplained = 0;
  bool monotone = true, sized = true, prefix = true, deterministic = true;

  for (auto algorithm : {Algorithm::moead, Algorithm::nsga3}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto config = RunConfig::defaults(ProblemId::dtlz2, 3, algorithm);
      config.generations = 150;
      config.seed = seed;
      Probe probe(config);
      Engine engine(config, probe);
      std::vector<Weights> before;
      probe.before = [&] { before = engine.reference_points(); };
      const std::size_t size = engine.population().size();
      std::vector<double> z(engine.ideal().begin(), engine.ideal().end());
      std::size_t seen = 0;
      while (!engine.done()) {
        engine.step();
        if (engine.population().size() != size) sized = false;
        for (std::size_t k = 0; k < z.size(); ++k) {
          if (engine.ideal()[k] > z[k]) monotone = false;
          z[k] = engine.ideal()[k];
        }
        if (engine.consultations() == seen) continue;
        seen = engine.consultations();
        const auto& after = engine.reference_points();
        for (std::size_t j = 0; j < after.size(); ++j) {
          double sum = 0.0;
          for (double v : after[j]) {
            sum += v;
            if (v < 0.0) simplex_err = std::max(simplex_err, -v);
          }
          simplex_err = std::max(simplex_err, std::fabs(sum - 1.0));
          if (after[j] == before[j]) continue;
          ++moved_points;
          // Recover the attractor a from w' = w + eta (a - w) and check that it
          // is a point of the previous set, and that |w' - a| = (1 - eta)|w - a|.
          Weights a(after[j].size());
          for (std::size_t d = 0; d < a.size(); ++d) a[d] = before[j][d] + (after[j][d] - before[j][d]) / config.eta;
          double nearest = INFINITY;
          std::size_t at = 0;
          for (std::size_t k = 0; k < before.size(); ++k) {
            const double dist = euclidean_distance(a, before[k]);
            if (dist < nearest) {
              nearest = dist;
              at = k;
            }
          }
          if (nearest > 1e-9) {
            ++unexplained;
            continue;
          }
          const double lhs = euclidean_distance(after[j], before[at]);
          const double rhs = (1.0 - config.eta) * euclidean_distance(before[j], before[at]);
          contraction_err = std::max(contraction_err, std::fabs(lhs - rhs));
        }
      }

      auto baseline_config = config;
      baseline_config.interactive = false;
      const auto baseline = run_single(baseline_config);
      const auto interactive = engine.result();
      for (std::size_t g = 0; g < config.schedule.tau; ++g)
        if (interactive.trajectory[g] != baseline.trajectory[g]) prefix = false;

      const auto again = run_single(config);
      if (result_to_json(again) != result_to_json(interactive)) deterministic = false;
    }
  }
  o.detail << " simplex error " << fmt(simplex_err) << ", contraction error " << fmt(contraction_err) << " over "
           << moved_points << " moves (" << unexplained << " unexplained), ideal monotone " << monotone
           << ", size conserved " << sized << ", baseline prefix identical " << prefix << ", deterministic "
           << deterministic;
  o.require(simplex_err <= kSimplexTol, "reference points on the simplex within 1e-12");
  o.require(moved_points > 0 && unexplained == 0, "every move is a contraction towards a previous reference point");
  o.require(contraction_err <= kContractionTol, "contraction factor (1 - eta) within 1e-12");
  o.require(monotone, "ideal point never increases");
  o.require(sized, "population size conserved");
  o.require(prefix, "generations before the first consultation match the baseline bit for bit");
  o.require(deterministic, "identical results for a fixed seed");
  return o;
}

Outcome transport_equivalence() {
  Outcome o;
  auto config = RunConfig::defaults(ProblemId::dtlz2, 3);
  config.generations = 100;
  config.seed = 7;
  const auto reference = run_single(config);

  SessionManager sessions;
  HttpService service(sessions);
  const int port = service.bind("127.0.0.1", 0);
  std::thread server([&] { service.listen(); });

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(60, 0);
  std::string phase;
  json state;
  std::size_t batches = 0;
  try {
    const auto created = client.Post("/sessions", config_to_json(config).dump(), "application/json");
    if (!created || created->status != 201) throw std::runtime_error("create failed");
    const std::string id = json::parse(created->body)["id"];
    for (int polls = 0; polls < 100000; ++polls) {
      state = json::parse(client.Get("/sessions/" + id)->body);
      phase = state["phase"];
      if (phase == "finished" || phase == "aborted") break;
      const auto pending = json::parse(client.Get("/sessions/" + id + "/pending")->body)["pending"];
      if (pending.is_null()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        continue;
      }
      json scores = json::object();
      for (const auto& c : pending["candidates"])
        scores[c["id"].get<std::string>()] = psi(c["objectives"].get<std::vector<double>>(), config.golden);
      const auto posted = client.Post("/sessions/" + id + "/scores", json{{"scores", scores}}.dump(), "application/json");
      if (!posted || posted->status != 200) throw std::runtime_error("score submission failed");
      ++batches;
    }
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }
  service.stop();
  server.join();

  const auto trajectory = state.value("trajectory", std::vector<double>{});
  std::size_t differing = 0;
  for (std::size_t g = 0; g < std::min(trajectory.size(), reference.trajectory.size()); ++g)
    differing += trajectory[g] != reference.trajectory[g];
  o.detail << " phase " << phase << ", " << batches << " batches over HTTP, " << trajectory.size()
           << " generations, " << differing << " differing; final error " << fmt(reference.final_error());
  o.require(phase == "finished", "session finished");
  o.require(batches == reference.consultations, "same number of consultations");
  o.require(trajectory.size() == reference.trajectory.size() && differing == 0, "bit-identical trajectory");
  return o;
}

struct Criterion {
  const char* name;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria{
    {"lattice_counts", "lattice counts 91/210/156/275", lattice_counts},
    {"table3_dtlz2_moead", "DTLZ2 m=3 interactive MOEA/D vs MOEA/D",
     [] { return table3(ProblemId::dtlz2, Algorithm::moead, kDtlz2Ceiling); }},
    {"table3_dtlz2_nsga3", "DTLZ2 m=3 interactive NSGA-III vs NSGA-III",
     [] { return table3(ProblemId::dtlz2, Algorithm::nsga3, kDtlz2Ceiling); }},
    {"table3_dtlz1_moead", "DTLZ1 m=3 interactive MOEA/D vs MOEA/D",
     [] { return table3(ProblemId::dtlz1, Algorithm::moead, kDtlz1Ceiling); }},
    {"utopia_ordering", "golden-value elicitation beats learned arms (DTLZ2, MOEA/D)", utopia_ordering},
    {"noise_degradation", "error grows with noise (DTLZ2, MOEA/D)", noise_degradation},
    {"oracle_equivalences", "oracle equivalences", oracle_equivalences},
    {"invariants", "invariant suite", invariants},
    {"transport_equivalence", "HTTP-scored session equals simulated run", transport_equivalence},
};

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--only NAME]\n";
      return 2;
    }
  }

  bool all_pass = true;
  bool matched = false;
  for (const auto& c : kCriteria) {
    if (!only.empty() && only != c.name) continue;
    matched = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " - " << c.title << ":" << o.detail.str() << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
