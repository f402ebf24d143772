#include "iemo/session.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace iemo {

using nlohmann::json;

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::running: return "running";
    case Phase::awaiting_scores: return "awaiting_scores";
    case Phase::finished: return "finished";
    case Phase::aborted: return "aborted";
  }
  return "";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::invalid_scores: return "invalid_scores";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::invalid_config: return "invalid_config";
  }
  return "";
}

struct SessionManager::Session {
  std::string id;
  RunConfig config;

  mutable std::mutex mutex;
  mutable std::condition_variable changed;
  Phase phase = Phase::running;
  std::optional<PendingBatch> pending;
  std::optional<std::vector<double>> submitted;
  bool abort_requested = false;

  std::size_t generation = 0;
  std::size_t consultations = 0;
  std::vector<double> trajectory;
  std::vector<ScoredRecord> records;
  std::optional<std::vector<Objectives>> final_population;
  std::vector<SessionEvent> events;

  std::jthread thread;

  // Caller holds `mutex`.
  void set_phase(Phase next) {
    phase = next;
    events.push_back(SessionEvent{events.size() + 1, phase, generation, consultations});
    changed.notify_all();
  }

  void sync_progress(const Engine& engine) {
    generation = engine.generation();
    consultations = engine.consultations();
    const auto& t = engine.trajectory();
    trajectory.insert(trajectory.end(), t.begin() + static_cast<std::ptrdiff_t>(trajectory.size()), t.end());
    const auto& r = engine.records();
    records.insert(records.end(), r.begin() + static_cast<std::ptrdiff_t>(records.size()), r.end());
  }
};

/// Parks the engine thread until the matching submit() or abort().
class SessionManager::HumanOracle : public DmOracle {
 public:
  explicit HumanOracle(Session& session) : session_(session) {}

  void attach(const Engine& engine) { engine_ = &engine; }

  std::vector<double> score(const ConsultationRequest& request) override {
    std::unique_lock lock(session_.mutex);
    if (session_.abort_requested) throw RunAborted();

    PendingBatch batch;
    batch.consultation = request.session;
    batch.generation = request.generation;
    batch.candidates = request.candidates;
    for (std::size_t k = 0; k < request.candidates.size(); ++k)
      batch.ids.push_back("c" + std::to_string(request.session) + "-" + std::to_string(k + 1));
    if (session_.config.problem.m <= 3) batch.population = request.population;

    if (engine_ != nullptr) session_.sync_progress(*engine_);
    session_.generation = request.generation;
    session_.pending = std::move(batch);
    session_.submitted.reset();
    session_.set_phase(Phase::awaiting_scores);

    session_.changed.wait(lock, [&] { return session_.submitted.has_value() || session_.abort_requested; });
    if (session_.abort_requested) throw RunAborted();

    std::vector<double> scores = std::move(*session_.submitted);
    session_.submitted.reset();
    return scores;
  }

 private:
  Session& session_;
  const Engine* engine_ = nullptr;
};

SessionManager::~SessionManager() {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(mutex_);
    for (auto& [id, s] : sessions_) all.push_back(s);
  }
  for (auto& s : all) {
    {
      std::lock_guard lock(s->mutex);
      s->abort_requested = true;
      s->changed.notify_all();
    }
    if (s->thread.joinable()) s->thread.join();
  }
}

namespace {

std::string make_token(std::uint64_t serial) {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::ostringstream out;
  out << 's' << serial << '-' << std::hex << std::setw(12) << std::setfill('0') << (gen() & 0xFFFFFFFFFFFFULL);
  return out.str();
}

}  // namespace

std::string SessionManager::create(RunConfig config) {
  config.oracle = OracleKind::human;
  auto session = std::make_shared<Session>();
  session->config = std::move(config);
  {
    std::lock_guard lock(mutex_);
    session->id = make_token(next_id_++);
    sessions_[session->id] = session;
  }
  {
    std::lock_guard lock(session->mutex);
    session->set_phase(Phase::running);
  }
  session->thread = std::jthread([session] { run(session); });
  return session->id;
}

void SessionManager::run(std::shared_ptr<Session> s) {
  HumanOracle oracle(*s);
  bool aborted = false;
  std::optional<Engine> engine;
  try {
    engine.emplace(s->config, oracle);
    oracle.attach(*engine);
    while (!engine->done()) {
      {
        std::lock_guard lock(s->mutex);
        if (s->abort_requested) {
          aborted = true;
          break;
        }
      }
      engine->step();
      std::lock_guard lock(s->mutex);
      s->sync_progress(*engine);
    }
  } catch (const RunAborted&) {
    aborted = true;
  } catch (const std::exception&) {
    aborted = true;  // a failing engine must not take the service down
  }

  std::lock_guard lock(s->mutex);
  if (engine) s->sync_progress(*engine);
  s->pending.reset();
  if (!aborted) s->final_population = objectives_of(engine->population());
  s->set_phase(aborted ? Phase::aborted : Phase::finished);
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(ErrorCode::not_found, "no session with id '" + id + "'");
  return it->second;
}

std::optional<PendingBatch> SessionManager::pending(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->pending;
}

void SessionManager::submit(const std::string& id, const std::map<std::string, double>& scores) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->phase != Phase::awaiting_scores || !s->pending)
    throw ServiceError(ErrorCode::conflict, "session is " + std::string(to_string(s->phase)) + "; no batch awaits scores");

  const auto& ids = s->pending->ids;
  std::vector<double> ordered;
  std::vector<std::string> missing;
  for (const auto& cid : ids) {
    const auto it = scores.find(cid);
    if (it == scores.end()) missing.push_back(cid);
    else ordered.push_back(it->second);
  }
  std::vector<std::string> extra;
  for (const auto& [cid, v] : scores) {
    if (std::find(ids.begin(), ids.end(), cid) == ids.end()) extra.push_back(cid);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string detail = "scores must cover exactly the pending candidates";
    if (!missing.empty()) {
      detail += "; missing:";
      for (const auto& m : missing) detail += " " + m;
    }
    if (!extra.empty()) {
      detail += "; unknown:";
      for (const auto& e : extra) detail += " " + e;
    }
    throw ServiceError(ErrorCode::invalid_scores, detail);
  }
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    if (!std::isfinite(ordered[k])) throw ServiceError(ErrorCode::invalid_scores, "score for " + ids[k] + " is not finite");
  }
  // The engine thread picks the scores up; the batch is settled from here on.
  s->submitted = std::move(ordered);
  s->pending.reset();
  s->set_phase(Phase::running);
}

SessionSnapshot SessionManager::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  SessionSnapshot snap;
  snap.id = s->id;
  snap.phase = s->phase;
  snap.generation = s->generation;
  snap.consultations = s->consultations;
  snap.trajectory = s->trajectory;
  snap.records = s->records;
  snap.final_population = s->final_population;
  snap.config = s->config;
  return snap;
}

void SessionManager::abort(const std::string& id) {
  auto s = find(id);
  {
    std::lock_guard lock(s->mutex);
    if (s->phase == Phase::finished || s->phase == Phase::aborted || s->abort_requested)
      throw ServiceError(ErrorCode::conflict, "session is already " +
                                                  std::string(s->abort_requested ? "aborted" : to_string(s->phase)));
    s->abort_requested = true;
    s->changed.notify_all();
  }
  if (s->thread.joinable()) s->thread.join();
}

Phase SessionManager::wait_while(const std::string& id, Phase phase, std::chrono::milliseconds timeout) const {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->changed.wait_for(lock, timeout, [&] { return s->phase != phase; });
  return s->phase;
}

std::vector<SessionEvent> SessionManager::events_after(const std::string& id, std::size_t after,
                                                       std::chrono::milliseconds timeout) const {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->changed.wait_for(lock, timeout, [&] { return s->events.size() > after; });
  if (s->events.size() <= after) return {};
  return {s->events.begin() + static_cast<std::ptrdiff_t>(after), s->events.end()};
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

json to_json(const PendingBatch& batch) {
  json candidates = json::array();
  for (std::size_t k = 0; k < batch.ids.size(); ++k)
    candidates.push_back({{"id", batch.ids[k]}, {"objectives", batch.candidates[k]}});
  json out{{"consultation", batch.consultation}, {"generation", batch.generation}, {"candidates", candidates}};
  out["population"] = batch.population ? json(*batch.population) : json(nullptr);
  return out;
}

json to_json(const SessionSnapshot& s) {
  json records = json::array();
  for (const auto& r : s.records) records.push_back({{"f", r.f}, {"score", r.score}, {"session", r.session}});
  json out{
      {"id", s.id},
      {"phase", to_string(s.phase)},
      {"generation", s.generation},
      {"generations", s.config.generations},
      {"consultations", s.consultations},
      {"trajectory", s.trajectory},
      {"records", records},
      {"config", config_to_json(s.config)},
  };
  out["final_population"] = s.final_population ? json(*s.final_population) : json(nullptr);
  return out;
}

json to_json(const SessionEvent& e) {
  return json{{"sequence", e.sequence},
              {"phase", to_string(e.phase)},
              {"generation", e.generation},
              {"consultations", e.consultations}};
}

}  // namespace iemo
