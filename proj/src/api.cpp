#include "qosbroker/api.hpp"

#include <httplib.h>

#include "qosbroker/document.hpp"
#include "qosbroker/matchmaking.hpp"

namespace qosbroker {

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateId: return 409;
    case Errc::UnknownId:
    case Errc::UnknownServiceId:
    case Errc::UnknownMode: return 404;
    case Errc::MalformedDocument: return 400;
    case Errc::IoFailure: return 500;
    default: return 422;
  }
}

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  send(res, http_status(e.code()),
       {{"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"subject", e.subject()}}}});
}

template <class Fn>
auto guarded(Fn fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send(res, 500, {{"error", {{"code", "internal"}, {"message", e.what()}, {"subject", ""}}}});
    }
  };
}

}  // namespace

ApiServer::ApiServer(std::shared_ptr<SharedRegistry> registry, Persist persist)
    : registry_(std::move(registry)),
      persist_(std::move(persist)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  return port_ > 0;
}

bool ApiServer::listen() { return server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

void ApiServer::wait_until_ready() const { server_->wait_until_ready(); }

void ApiServer::install_routes() {
  auto& svr = *server_;

  svr.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto snap = registry_->snapshot();
            send(res, 200, {{"status", "ok"}, {"revision", snap->revision()}, {"count", snap->size()}});
          }));

  svr.Get("/services", guarded([this](const httplib::Request&, httplib::Response& res) {
            auto snap = registry_->snapshot();
            Json list = Json::array();
            for (const auto& r : snap->services()) list.push_back(record_to_json(r));
            send(res, 200, {{"revision", snap->revision()}, {"services", list}});
          }));

  svr.Get(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto snap = registry_->snapshot();
            send(res, 200, record_to_json(snap->get_service(req.matches[1].str())));
          }));

  svr.Post("/services", guarded([this](const httplib::Request& req, httplib::Response& res) {
             ServiceRecord record = record_from_json(parse_document(req.body));
             const std::string id = record.id;
             auto snap = registry_->mutate([&](RegistryStore& s) {
               s.register_service(std::move(record));
               if (persist_) persist_(s);
             });
             res.set_header("Location", "/services/" + id);
             send(res, 201, record_to_json(snap->get_service(id)));
           }));

  svr.Put(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1].str();
            ServiceRecord record = record_from_json(parse_document(req.body));
            auto snap = registry_->mutate([&](RegistryStore& s) {
              s.update_service(id, std::move(record));
              if (persist_) persist_(s);
            });
            send(res, 200, record_to_json(snap->get_service(id)));
          }));

  svr.Delete(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1].str();
               auto snap = registry_->mutate([&](RegistryStore& s) {
                 s.remove_service(id);
                 if (persist_) persist_(s);
               });
               send(res, 200, {{"deleted", id}, {"revision", snap->revision()}});
             }));

  svr.Post("/match", guarded([this](const httplib::Request& req, httplib::Response& res) {
             const MatchRequest request = request_from_json(parse_document(req.body));
             auto snap = registry_->snapshot();
             validate_request(request, snap->schema());
             const auto candidates = snap->find_by_function(request.functional_tags);
             if (candidates.empty()) {
               send(res, 200, result_to_json(MatchResult{}, std::string(kNoFunctionalMatch)));
               return;
             }
             send(res, 200, result_to_json(match(request, candidates, snap->schema())));
           }));
}

}  // namespace qosbroker
