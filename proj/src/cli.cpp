#include "qosbroker/cli.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qosbroker/api.hpp"
#include "qosbroker/document.hpp"
#include "qosbroker/error.hpp"
#include "qosbroker/matchmaking.hpp"
#include "qosbroker/registry.hpp"

namespace qosbroker::cli {

namespace {

// Raised for failures that map to exit code 2.
struct EnvironmentFailure {
  std::string message;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentFailure{"cannot read " + path.string()};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_document(const std::filesystem::path& path) { return parse_document(read_file(path)); }

RegistryStore open_store(const CliConfig& cfg) {
  try {
    return load_store(cfg.store_path);
  } catch (const Error& e) {
    throw EnvironmentFailure{std::string(to_string(e.code())) + ": " + e.what()};
  }
}

QosSchema schema_for_new_store(const CliConfig& cfg) {
  if (cfg.schema_path) return schema_from_json(read_document(*cfg.schema_path));
  return default_schema();
}

void persist(const RegistryStore& store, const std::filesystem::path& path) {
  try {
    save_store(store, path);
  } catch (const Error& e) {
    throw EnvironmentFailure{e.what()};
  }
}

void report(std::ostream& err, const Error& e) {
  fmt::print(err, "error: {}", to_string(e.code()));
  if (!e.subject().empty()) fmt::print(err, " [{}]", e.subject());
  fmt::print(err, ": {}\n", e.what());
}

template <class Fn>
int guarded(std::ostream& err, Fn fn) {
  try {
    return fn();
  } catch (const EnvironmentFailure& f) {
    fmt::print(err, "error: {}\n", f.message);
    return kEnvironment;
  } catch (const Error& e) {
    report(err, e);
    return e.code() == Errc::IoFailure ? kEnvironment : kValidation;
  }
}

std::size_t id_width(const MatchResult& r) {
  std::size_t w = 2;
  for (const auto& s : r.ranking) w = std::max(w, s.id.size());
  return w;
}

void print_ranking(std::ostream& out, const MatchResult& r) {
  const auto w = id_width(r);
  fmt::print(out, "{:<{}} {}\n", "id", w, "distance");
  for (const auto& s : r.ranking) fmt::print(out, "{:<{}} {:.4f}\n", s.id, w, s.distance);
  if (!r.ranked) fmt::print(out, "(unranked: no QoS requirement given)\n");
}

void print_explanation(std::ostream& out, const MatchResult& r) {
  for (const auto& s : r.ranking) {
    fmt::print(out, "\n{} (distance {:.4f})\n", s.id, s.distance);
    fmt::print(out, "  {:<16} {:>8} {:>8} {:>8} {:>12}\n", "property", "request", "service",
               "weight", "contribution");
    for (const auto& c : s.contributions)
      fmt::print(out, "  {:<16} {:>8.4f} {:>8.4f} {:>8.4f} {:>12.4f}\n", c.property,
                 c.request_norm, c.service_norm, c.weight, c.contribution);
  }
}

std::vector<ServiceRecord> records_from_input(const Json& doc, std::optional<QosSchema>& embedded) {
  std::vector<ServiceRecord> out;
  if (doc.is_array()) {
    for (const auto& r : doc) out.push_back(record_from_json(r));
  } else if (doc.is_object() && doc.contains("version")) {
    RegistryStore s = store_from_json(doc);
    embedded = s.schema();
    out = s.services();
  } else {
    out.push_back(record_from_json(doc));
  }
  return out;
}

bool blank(const std::string& text) {
  return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

QosSchema default_schema() {
  return validate_schema({{"scalability", Direction::Maximize, "ratio"},
                          {"response_time", Direction::Minimize, "ms"},
                          {"throughput", Direction::Maximize, "requests/s"},
                          {"availability", Direction::Maximize, "ratio"},
                          {"accessibility", Direction::Maximize, "ratio"},
                          {"cost", Direction::Minimize, "currency units"}});
}

int cmd_register(const CliConfig& cfg, const std::filesystem::path& file, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = read_file(file);
    std::optional<QosSchema> embedded;
    std::vector<ServiceRecord> records;
    if (!blank(text)) records = records_from_input(parse_document(text), embedded);

    const bool exists = std::filesystem::exists(cfg.store_path);
    RegistryStore store = exists ? open_store(cfg)
                                 : RegistryStore(embedded ? *embedded : schema_for_new_store(cfg));
    if (embedded && !(*embedded == store.schema()))
      throw Error(Errc::SchemaMismatch, file.string(),
                  "schema in " + file.string() + " differs from the store schema");

    // All or nothing: the store is only written once every record went in.
    for (auto& r : records) {
      const std::string id = r.id;
      try {
        store.register_service(std::move(r));
      } catch (const Error& e) {
        throw Error(e.code(), id, e.what());
      }
    }
    persist(store, cfg.store_path);
    fmt::print(out, "registered {}\n", records.size());
    return kOk;
  });
}

int cmd_match(const CliConfig& cfg, const std::filesystem::path& request_file,
              std::optional<std::size_t> top, bool explain, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RegistryStore store = open_store(cfg);
    MatchRequest request = request_from_json(read_document(request_file));
    if (top) request.top_k = *top;
    validate_request(request, store.schema());

    const auto candidates = store.find_by_function(request.functional_tags);
    MatchResult result;
    std::optional<std::string> feedback;
    if (candidates.empty()) {
      feedback = kNoFunctionalMatch;
    } else {
      result = match(request, candidates, store.schema());
    }

    if (cfg.output == Output::Document) {
      fmt::print(out, "{}\n", result_to_json(result, feedback).dump(2));
      return kOk;
    }
    if (feedback) {
      fmt::print(out, "{}\n", *feedback);
      return kOk;
    }
    print_ranking(out, result);
    if (explain) print_explanation(out, result);
    return kOk;
  });
}

int cmd_compare(const CliConfig& cfg, const std::filesystem::path& request_file,
                const std::filesystem::path& weights_file, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RegistryStore store = open_store(cfg);
    const MatchRequest base = request_from_json(read_document(request_file));
    const auto schemes = schemes_from_json(read_document(weights_file));
    if (schemes.empty()) throw Error(Errc::MalformedDocument, weights_file.string(), "no weight scheme given");

    const auto candidates = store.find_by_function(base.functional_tags);
    if (candidates.empty()) {
      if (cfg.output == Output::Document)
        fmt::print(out, "{}\n", Json{{"schemes", Json::array()}, {"feedback", kNoFunctionalMatch}}.dump(2));
      else
        fmt::print(out, "{}\n", kNoFunctionalMatch);
      return kOk;
    }
    const SchemeComparison cmp = compare_schemes(base, schemes, candidates, store.schema());

    if (cfg.output == Output::Document) {
      Json list = Json::array();
      for (const auto& o : cmp.outcomes) {
        const auto* w = o.result.winner();
        list.push_back({{"name", o.name},
                        {"winner", w ? Json(w->id) : Json(nullptr)},
                        {"winner_changed", o.winner_changed},
                        {"result", result_to_json(o.result)}});
      }
      fmt::print(out, "{}\n", Json{{"schemes", list}, {"winner_changed", cmp.any_winner_changed()}}.dump(2));
      return kOk;
    }

    std::size_t idw = 2;
    std::size_t rows = 0;
    for (const auto& o : cmp.outcomes) {
      idw = std::max(idw, id_width(o.result));
      rows = std::max(rows, o.result.ranking.size());
    }
    const std::size_t colw = std::max<std::size_t>(idw + 8, 12);
    std::string header = fmt::format("{:<4}", "rank");
    for (const auto& o : cmp.outcomes) header += fmt::format(" | {:<{}}", o.name, colw);
    fmt::print(out, "{}\n", header);
    for (std::size_t i = 0; i < rows; ++i) {
      std::string line = fmt::format("{:<4}", i + 1);
      for (const auto& o : cmp.outcomes) {
        std::string cell;
        if (i < o.result.ranking.size()) {
          const auto& r = o.result.ranking[i];
          cell = fmt::format("{:<{}} {:.4f}", r.id, idw, r.distance);
        }
        line += fmt::format(" | {:<{}}", cell, colw);
      }
      fmt::print(out, "{}\n", line);
    }
    std::string winners;
    for (const auto& o : cmp.outcomes) {
      if (!winners.empty()) winners += " | ";
      const auto* w = o.result.winner();
      winners += fmt::format("{}: {}{}", o.name, w ? w->id : "-", o.winner_changed ? " *" : "");
    }
    fmt::print(out, "winner: {}\n", winners);
    if (cmp.any_winner_changed())
      fmt::print(out, "* winner differs from scheme '{}'\n", cmp.outcomes.front().name);
    return kOk;
  });
}

int cmd_serve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto colon = cfg.address.rfind(':');
    int port = -1;
    if (colon != std::string::npos) {
      try {
        port = std::stoi(cfg.address.substr(colon + 1));
      } catch (const std::exception&) {
      }
    }
    if (port < 0 || port > 65535)
      throw Error(Errc::MalformedDocument, cfg.address, "address must be host:port");
    const std::string host = cfg.address.substr(0, colon);

    RegistryStore initial = std::filesystem::exists(cfg.store_path)
                                ? open_store(cfg)
                                : RegistryStore(schema_for_new_store(cfg));
    persist(initial, cfg.store_path);

    // Block the signals before any server thread starts so only the waiter
    // below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    auto registry = std::make_shared<SharedRegistry>(std::move(initial));
    const auto path = cfg.store_path;
    ApiServer server(registry, [path](const RegistryStore& s) { save_store(s, path); });
    if (!server.bind(host, port)) throw EnvironmentFailure{"cannot bind " + cfg.address};

    std::atomic<bool> done{false};
    std::thread waiter([&] {
      const timespec tick{0, 100'000'000};
      while (!done.load()) {
        if (sigtimedwait(&signals, nullptr, &tick) > 0) break;
      }
      server.stop();
    });

    fmt::print(out, "serving on {}:{} (store {})\n", host, server.port(), cfg.store_path.string());
    out.flush();
    server.listen();
    done = true;
    waiter.join();

    persist(*registry->snapshot(), cfg.store_path);
    fmt::print(out, "stopped; store saved at revision {}\n", registry->snapshot()->revision());
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"QoS-aware service registry and matchmaking broker", "qosbroker"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string store = cfg.store_path.string();
  std::string schema;
  std::string output = "table";
  app.add_option("--store", store, "Registry store file")->envname("QOS_STORE");
  app.add_option("--schema", schema, "Schema document used when the store does not exist yet");
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"table", "document"}));

  std::string file;
  auto* reg = app.add_subcommand("register", "Register every service in a file (atomic)");
  reg->add_option("file", file, "Service record(s) or store document")->required();
  reg->fallthrough();

  std::string request_file;
  std::size_t top = 0;
  bool explain = false;
  auto* mat = app.add_subcommand("match", "Rank candidates for a match request");
  mat->add_option("request", request_file, "Match request document")->required();
  mat->add_option("--top", top, "Result cap, overrides top_k")->check(CLI::PositiveNumber);
  mat->add_flag("--explain", explain, "Append per-dimension contributions");
  mat->fallthrough();

  std::string weights_file;
  auto* cmp = app.add_subcommand("compare", "Compare named weight schemes on one request");
  cmp->add_option("request", request_file, "Match request document")->required();
  cmp->add_option("--weights", weights_file, "Named weight schemes")->required();
  cmp->fallthrough();

  std::string addr = cfg.address;
  auto* srv = app.add_subcommand("serve", "Run the HTTP API");
  srv->add_option("--addr", addr, "host:port to bind")->envname("QOS_ADDR");
  srv->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostream& stream = e.get_exit_code() == 0 ? out : err;
    const int code = app.exit(e, stream, stream);
    return code == 0 ? kOk : kValidation;
  }

  cfg.store_path = store;
  cfg.address = addr;
  cfg.output = output == "document" ? Output::Document : Output::Table;
  if (!schema.empty()) cfg.schema_path = schema;

  if (*reg) return cmd_register(cfg, file, out, err);
  if (*mat) return cmd_match(cfg, request_file, top ? std::optional(top) : std::nullopt, explain, out, err);
  if (*cmp) return cmd_compare(cfg, request_file, weights_file, out, err);
  return cmd_serve(cfg, out, err);
}

}  // namespace qosbroker::cli
