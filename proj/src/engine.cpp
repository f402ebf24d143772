#include "iemo/engine.hpp"

#include <cmath>
#include <limits>

namespace iemo {

using nlohmann::json;

std::uint64_t oracle_seed(std::uint64_t run_seed) { return run_seed ^ 0x9E3779B97F4A7C15ULL; }

Engine::Engine(RunConfig config, DmOracle& oracle)
    : config_(std::move(config)), oracle_(oracle), rng_(config_.seed) {
  auto points = config_.lattice.build(config_.problem.m);
  if (config_.algorithm == Algorithm::moead) {
    state_ = moead_init(config_.problem, std::move(points), config_.moead, rng_);
  } else {
    state_ = nsga3_init(config_.problem, std::move(points), config_.population, rng_);
  }
  golden_ = golden_point(config_.problem, config_.golden);
}

const Population& Engine::population() const {
  return std::visit([](const auto& s) -> const Population& { return s.P; }, state_);
}

const std::vector<Weights>& Engine::reference_points() const {
  return std::visit([](const auto& s) -> const std::vector<Weights>& { return s.W.points; }, state_);
}

std::span<const double> Engine::ideal() const {
  return std::visit([](const auto& s) { return std::span<const double>(s.z.z); }, state_);
}

std::vector<Association> Engine::associations() const {
  if (const auto* moead = std::get_if<MoeadState>(&state_)) {
    std::vector<Association> out(moead->P.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].reference = i;
    return out;
  }
  const auto& nsga = std::get<Nsga3State>(state_);
  return associate_all(objectives_of(nsga.P), nsga.W.points, nsga.z.z);
}

void Engine::step() {
  if (done()) return;
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, MoeadState>) {
          moead_generation(s, config_.problem, config_.variation, rng_);
        } else {
          nsga3_generation(s, config_.problem, config_.variation, rng_);
        }
      },
      state_);
  ++generation_;
  trajectory_.push_back(approximation_error(population(), golden_));

  if (config_.interactive && config_.schedule.consults_at(generation_, config_.generations)) consult();

  double trend = std::numeric_limits<double>::quiet_NaN();
  if (model_) {
    trend = std::numeric_limits<double>::infinity();
    for (const auto& s : population()) trend = std::min(trend, (*model_)(s.f));
  }
  value_trend_.push_back(trend);
}

void Engine::consult() {
  const std::size_t session = consultations_ + 1;
  const auto assoc = associations();
  const auto& W = reference_points();
  const auto& P = population();

  const ValueFunction learned = [this](std::span<const double> f) { return (*model_)(f); };
  const CandidateContext ctx{P, W, assoc, ideal()};
  const auto picked = pick_candidates(ctx, model_ ? &learned : nullptr, config_.schedule, session);

  ConsultationRequest request;
  request.session = session;
  request.generation = generation_;
  for (std::size_t i : picked) request.candidates.push_back(P[i].f);
  request.population = objectives_of(P);

  const auto scores = dm_score(oracle_, request);
  consultations_ = session;

  std::vector<ScoredRecord> latest;
  std::vector<std::size_t> refs;
  for (std::size_t k = 0; k < picked.size(); ++k) {
    latest.push_back(ScoredRecord{request.candidates[k], scores[k], session});
    refs.push_back(assoc[picked[k]].reference);
  }
  records_.insert(records_.end(), latest.begin(), latest.end());
  model_ = train_avf(records_, config_.kernel);

  const GoldenSpec golden = config_.golden;
  const ValueFunction utopia = [golden](std::span<const double> f) { return psi(f, golden); };
  const ValueFunction& value = config_.value_source == ValueSource::golden ? utopia : learned;

  const BestRecord best = resolve_best(latest, refs, W);
  const PromisingSet promising = identify_promising(P, assoc, value, config_.schedule.mu_for(session));
  auto migrated = elicit(W, promising, best, value, ideal(), config_.eta, config_.guard);
  std::visit([&](auto& s) { adopt_reference_set(s, std::move(migrated)); }, state_);
}

RunResult Engine::result(bool aborted) const {
  RunResult r;
  r.config = config_;
  r.golden = golden_;
  r.trajectory = trajectory_;
  r.value_trend = value_trend_;
  r.final_objectives = objectives_of(population());
  r.records = records_;
  r.evaluations = std::visit([](const auto& s) { return s.evaluations; }, state_);
  r.consultations = consultations_;
  r.aborted = aborted;
  return r;
}

RunResult run_single(const RunConfig& config) {
  SimulatedOracle oracle(config.golden, config.noise(), oracle_seed(config.seed));
  return run_single(config, oracle);
}

RunResult run_single(const RunConfig& config, DmOracle& oracle, std::stop_token stop) {
  Engine engine(config, oracle);
  try {
    while (!engine.done()) {
      if (stop.stop_requested()) return engine.result(true);
      engine.step();
    }
  } catch (const RunAborted&) {
    return engine.result(true);
  }
  return engine.result(false);
}

json result_to_json(const RunResult& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back({{"f", rec.f}, {"score", rec.score}, {"session", rec.session}});
  json trend = json::array();
  for (double v : r.value_trend) trend.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  return json{
      {"config", config_to_json(r.config)},
      {"seed", r.config.seed},
      {"golden_point", r.golden},
      {"trajectory", r.trajectory},
      {"value_trend", trend},
      {"final_error", r.final_error()},
      {"final_population", r.final_objectives},
      {"records", records},
      {"evaluations", r.evaluations},
      {"consultations", r.consultations},
      {"aborted", r.aborted},
  };
}

}  // namespace iemo
