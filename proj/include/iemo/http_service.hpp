#pragma once

#include "iemo/session.hpp"

#include <atomic>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace iemo {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port

  /// Defaults overridden by IEMO_BIND and IEMO_PORT when set.
  static ServiceOptions from_env();
};

/// JSON-over-HTTP front end for a SessionManager.
///
///   POST /sessions                  create (body: run config)      -> 201
///   GET  /sessions/{id}             state snapshot
///   GET  /sessions/{id}/pending     pending batch or null
///   POST /sessions/{id}/scores      {"scores": {"<candidate id>": <real>, ...}}
///   POST /sessions/{id}/abort
///   GET  /sessions/{id}/events      server-sent phase events
///
/// Errors are application/problem+json with a stable "code": not_found,
/// invalid_scores, conflict, invalid_config or bad_request.
class HttpService {
 public:
  explicit HttpService(SessionManager& sessions);
  ~HttpService();

  /// Binds without serving yet; returns the bound port. Throws
  /// std::runtime_error when the address is unavailable.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Call after bind().
  void listen();

  void stop();

 private:
  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
};

}  // namespace iemo
