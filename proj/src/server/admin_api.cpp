#include "admin_api.hpp"

#include <httplib.h>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "uim/server/server.hpp"

namespace uim::server {

namespace {

using nlohmann::ordered_json;

void reply(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  reply(res, status, ordered_json{{"code", code}, {"message", message}});
}

ordered_json load_error_json(const repo::LoadError& e) {
  ordered_json j;
  j["code"] = e.code();
  j["message"] = e.what();
  j["file"] = e.file();
  if (e.parse_error()) {
    j["line"] = e.parse_error()->line();
    j["column"] = e.parse_error()->column();
  } else {
    j["line"] = nullptr;
    j["column"] = nullptr;
  }
  return j;
}

}  // namespace

AdminApi::AdminApi(Server& server) : server_(server), http_(std::make_unique<httplib::Server>()) {
  routes();
}

AdminApi::~AdminApi() { stop(); }

void AdminApi::routes() {
  http_->Get("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
    std::string body = "[";
    bool first = true;
    for (const auto& info : server_.registry().list()) {
      if (!first) body += ',';
      first = false;
      body += to_json(info);
    }
    body += ']';
    res.set_content(body, "application/json");
  });

  http_->Get("/api/repository", [this](const httplib::Request&, httplib::Response& res) {
    const auto snap = server_.store().current();
    ordered_json j;
    j["version"] = snap->version;
    auto screens = ordered_json::array();
    for (const auto& s : snap->doc().screens) screens.push_back(s.id);
    auto flows = ordered_json::array();
    for (const auto& f : snap->doc().flows) flows.push_back(f.id);
    j["root"] = snap->doc().root_menu;
    j["screens"] = std::move(screens);
    j["flows"] = std::move(flows);
    reply(res, 200, j);
  });

  http_->Post("/api/reload", [this](const httplib::Request&, httplib::Response& res) {
    auto result = server_.store().reload();
    if (result.error) {
      spdlog::warn("reload failed: {}", result.error->what());
      reply(res, 409, load_error_json(*result.error));
      return;
    }
    spdlog::info("repository reloaded, version {}", result.snapshot->version);
    reply(res, 200, ordered_json{{"version", result.snapshot->version}});
  });

  http_->Post(R"(/api/sessions/([^/]+)/disconnect)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto handle = server_.registry().find(id);
    if (!handle) {
      error(res, 404, "NotFound", "no session " + id);
      return;
    }
    handle->request_disconnect();
    reply(res, 202, ordered_json{{"session_id", id}});
  });

  http_->Get(R"(/api/sessions/([^/]+)/mirror)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto handle = server_.registry().find(id);
    if (!handle) {
      error(res, 404, "NotFound", "no session " + id);
      return;
    }
    auto sub = handle->subscribe();
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this, sub](std::size_t, httplib::DataSink& sink) {
      while (!server_.stopping()) {
        if (!sink.is_writable()) return false;
        auto event = sub->next(std::chrono::milliseconds(250));
        if (event) {
          const std::string chunk = "event: frame\ndata: " + *event + "\n\n";
          return sink.write(chunk.data(), chunk.size());
        }
        if (sub->closed()) break;
      }
      const std::string end = "event: end\ndata: {}\n\n";
      sink.write(end.data(), end.size());
      sink.done();
      return true;
    });
  });

  http_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      error(res, res.status, res.status == 404 ? "NotFound" : "HttpError", httplib::status_message(res.status));
    }
  });
  http_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    error(res, 500, "Internal", what);
  });
}

std::uint16_t AdminApi::start(const std::string& address, std::uint16_t port) {
  int bound = port;
  if (port == 0) {
    bound = http_->bind_to_any_port(address);
  } else if (!http_->bind_to_port(address, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw std::system_error(std::make_error_code(std::errc::address_in_use),
                            "admin api: cannot bind " + address + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  return static_cast<std::uint16_t>(bound);
}

void AdminApi::stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace uim::server
