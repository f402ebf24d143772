#include "iemo/http_service.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <memory>

namespace iemo {

using nlohmann::json;

ServiceOptions ServiceOptions::from_env() {
  ServiceOptions options;
  if (const char* host = std::getenv("IEMO_BIND"); host != nullptr && *host != '\0') options.host = host;
  if (const char* port = std::getenv("IEMO_PORT"); port != nullptr && *port != '\0') {
    char* end = nullptr;
    const long value = std::strtol(port, &end, 10);
    if (*end != '\0' || value < 0 || value > 65535) throw std::invalid_argument("IEMO_PORT must be a port number");
    options.port = static_cast<int>(value);
  }
  return options;
}

namespace {

int status_for(std::string_view code) {
  if (code == "not_found") return 404;
  if (code == "conflict") return 409;
  if (code == "invalid_scores" || code == "invalid_config") return 422;
  if (code == "internal") return 500;
  return 400;
}

void problem(httplib::Response& res, std::string_view code, const std::string& title, const std::string& detail,
             json extra = json::object()) {
  json doc{{"type", "about:blank"},
           {"title", title},
           {"status", status_for(code)},
           {"detail", detail},
           {"code", code}};
  doc.update(extra);
  res.status = status_for(code);
  res.set_content(doc.dump(), "application/problem+json");
}

void reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void service_error(httplib::Response& res, const ServiceError& e) {
  static const std::map<ErrorCode, std::string> titles{
      {ErrorCode::not_found, "Session not found"},
      {ErrorCode::invalid_scores, "Invalid scores"},
      {ErrorCode::conflict, "Conflicting session state"},
      {ErrorCode::invalid_config, "Invalid configuration"},
  };
  problem(res, to_string(e.code()), titles.at(e.code()), e.what());
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    problem(res, "bad_request", "Malformed JSON", e.what());
    return std::nullopt;
  }
}

bool terminal(Phase phase) { return phase == Phase::finished || phase == Phase::aborted; }

}  // namespace

HttpService::HttpService(SessionManager& sessions) : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
    res.status = 204;
  });

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, {{"status", "ok"}}); });

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req, res);
    if (!body) return;
    try {
      const RunConfig config = config_from_json(*body);
      const std::string id = sessions_.create(config);
      res.set_header("Location", "/sessions/" + id);
      reply(res, {{"id", id}, {"phase", to_string(sessions_.state(id).phase)}}, 201);
    } catch (const ConfigError& e) {
      json errors = json::array();
      for (const auto& fe : e.errors()) errors.push_back({{"field", fe.field}, {"message", fe.message}});
      problem(res, "invalid_config", "Invalid configuration", e.what(), {{"errors", errors}});
    }
  });

  srv.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, to_json(sessions_.state(req.matches[1])));
    } catch (const ServiceError& e) {
      service_error(res, e);
    }
  });

  srv.Get(R"(/sessions/([^/]+)/pending)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto batch = sessions_.pending(req.matches[1]);
      reply(res, {{"pending", batch ? to_json(*batch) : json(nullptr)}});
    } catch (const ServiceError& e) {
      service_error(res, e);
    }
  });

  srv.Post(R"(/sessions/([^/]+)/scores)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req, res);
    if (!body) return;
    try {
      if (!body->is_object() || !body->contains("scores") || !body->at("scores").is_object())
        throw ServiceError(ErrorCode::invalid_scores, R"(expected {"scores": {"<candidate id>": <number>, ...}})");
      std::map<std::string, double> scores;
      for (const auto& [cid, value] : body->at("scores").items()) {
        if (!value.is_number()) throw ServiceError(ErrorCode::invalid_scores, "score for " + cid + " is not a number");
        scores[cid] = value.get<double>();
      }
      sessions_.submit(req.matches[1], scores);
      reply(res, {{"accepted", true}, {"phase", to_string(sessions_.state(req.matches[1]).phase)}});
    } catch (const ServiceError& e) {
      // An unknown session outranks a malformed body.
      try {
        sessions_.state(req.matches[1]);
      } catch (const ServiceError& missing) {
        return service_error(res, missing);
      }
      service_error(res, e);
    }
  });

  srv.Post(R"(/sessions/([^/]+)/abort)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      sessions_.abort(req.matches[1]);
      reply(res, {{"phase", to_string(sessions_.state(req.matches[1]).phase)}});
    } catch (const ServiceError& e) {
      service_error(res, e);
    }
  });

  srv.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    try {
      sessions_.state(id);
    } catch (const ServiceError& e) {
      return service_error(res, e);
    }
    auto cursor = std::make_shared<std::size_t>(0);
    if (req.has_header("Last-Event-ID")) {
      try {
        *cursor = std::stoul(req.get_header_value("Last-Event-ID"));
      } catch (const std::logic_error&) {
      }
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this, id, cursor](std::size_t, httplib::DataSink& sink) {
      if (stopping_ || !sink.is_writable()) return false;
      for (const auto& e : sessions_.events_after(id, *cursor, std::chrono::milliseconds(250))) {
        const std::string frame =
            "id: " + std::to_string(e.sequence) + "\nevent: phase\ndata: " + to_json(e).dump() + "\n\n";
        if (!sink.write(frame.data(), frame.size())) return false;
        *cursor = e.sequence;
        if (terminal(e.phase)) {
          sink.done();
          return true;
        }
      }
      return true;
    });
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string detail = "unexpected error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    problem(res, "internal", "Internal error", detail);
  });

  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) problem(res, "not_found", "Not found", "no route for " + req.path);
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop() {
  stopping_ = true;
  server_->stop();
}

}  // namespace iemo
