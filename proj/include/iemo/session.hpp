#pragma once

#include "iemo/config.hpp"
#include "iemo/engine.hpp"

#include <json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace iemo {

enum class Phase { running, awaiting_scores, finished, aborted };

std::string_view to_string(Phase phase);

/// Candidates waiting for a human score. Ids are unique within the session.
struct PendingBatch {
  std::size_t consultation = 0;
  std::size_t generation = 0;
  std::vector<std::string> ids;
  std::vector<Objectives> candidates;
  std::optional<std::vector<Objectives>> population;  // only for m <= 3
};

struct SessionSnapshot {
  std::string id;
  Phase phase = Phase::running;
  std::size_t generation = 0;
  std::size_t consultations = 0;
  std::vector<double> trajectory;
  std::vector<ScoredRecord> records;
  std::optional<std::vector<Objectives>> final_population;  // finished runs only
  RunConfig config;
};

/// Event pushed to subscribers on every phase change.
struct SessionEvent {
  std::size_t sequence = 0;
  Phase phase = Phase::running;
  std::size_t generation = 0;
  std::size_t consultations = 0;
};

enum class ErrorCode { not_found, invalid_scores, conflict, invalid_config };

std::string_view to_string(ErrorCode code);

class ServiceError : public std::runtime_error {
 public:
  ServiceError(ErrorCode code, std::string detail) : std::runtime_error(detail), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Owns the live sessions. Each session runs its engine on its own thread
/// and parks inside the oracle while a batch awaits scores; all state
/// transitions of a session are serialized by its mutex.
class SessionManager {
 public:
  SessionManager() = default;
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;
  /// Aborts and joins every session still running.
  ~SessionManager();

  /// Starts a run scored by a human. Golden and noise settings only shape
  /// the reported error trajectory.
  std::string create(RunConfig config);

  /// Throws ServiceError(not_found).
  std::optional<PendingBatch> pending(const std::string& id) const;

  /// Scores must cover exactly the pending ids and be finite
  /// (invalid_scores); there must be a pending batch (conflict).
  void submit(const std::string& id, const std::map<std::string, double>& scores);

  SessionSnapshot state(const std::string& id) const;

  /// Cancels the run and waits for its thread. Conflict when the session
  /// already finished or was aborted.
  void abort(const std::string& id);

  /// Blocks until the session leaves `phase` or `timeout` passes; returns the
  /// phase at that point.
  Phase wait_while(const std::string& id, Phase phase, std::chrono::milliseconds timeout) const;

  /// Events after `after` (by sequence number), waiting up to `timeout` for
  /// at least one. Returns an empty list on timeout.
  std::vector<SessionEvent> events_after(const std::string& id, std::size_t after,
                                         std::chrono::milliseconds timeout) const;

  std::vector<std::string> ids() const;

 private:
  struct Session;
  class HumanOracle;

  std::shared_ptr<Session> find(const std::string& id) const;
  static void run(std::shared_ptr<Session> session);

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

nlohmann::json to_json(const PendingBatch& batch);
nlohmann::json to_json(const SessionSnapshot& snapshot);
nlohmann::json to_json(const SessionEvent& event);

}  // namespace iemo
