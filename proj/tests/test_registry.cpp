#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fixtures.hpp"
#include "qosbroker/document.hpp"
#include "qosbroker/error.hpp"
#include "qosbroker/matchmaking.hpp"
#include "qosbroker/registry.hpp"

using namespace qosbroker;
using namespace qosbroker::testing;
namespace fs = std::filesystem;

namespace {

RegistryStore weather_store() {
  RegistryStore s(weather_schema());
  for (auto& r : weather_services()) s.register_service(r);
  return s;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::IoFailure;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qosbroker-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("register_service") {
  RegistryStore s(weather_schema());
  s.register_service(weather_service(0));
  CHECK(s.size() == 1);
  CHECK(s.revision() == 1);
  CHECK(s.get_service("ws_1").profiles.at(kMode).get("cost") == 500.0);

  CHECK(code_of([&] { s.register_service(weather_service(0)); }) == Errc::DuplicateId);
  auto bad = weather_service(1);
  bad.profiles[kMode].values["latency"] = 1;
  CHECK(code_of([&] { s.register_service(bad); }) == Errc::UnknownProperty);
  bad = weather_service(1);
  bad.profiles.clear();
  CHECK(code_of([&] { s.register_service(bad); }) == Errc::NoProfiles);
  CHECK(s.revision() == 1);
  CHECK(s.size() == 1);
}

TEST_CASE("find_by_function") {
  auto s = weather_store();
  auto news = weather_service(0);
  news.id = "news";
  news.functional_tags = {"news", "weather"};
  s.register_service(news);

  auto ids = [](const std::vector<ServiceRecord>& rs) {
    std::vector<std::string> out;
    for (const auto& r : rs) out.push_back(r.id);
    return out;
  };
  CHECK(ids(s.find_by_function({"weather"})) ==
        std::vector<std::string>{"ws_1", "ws_2", "ws_3", "ws_4", "news"});
  CHECK(ids(s.find_by_function({"WEATHER", "news"})) == std::vector<std::string>{"news"});
  CHECK(s.find_by_function({"payments"}).empty());
  CHECK(s.find_by_function({}).size() == 5);
}

TEST_CASE("update, remove, get") {
  auto s = weather_store();
  const auto rev = s.revision();

  SUBCASE("update is visible to the next matrix") {
    auto r = s.get_service("ws_2");
    r.profiles[kMode].values["cost"] = 90;
    s.update_service("ws_2", r);
    CHECK(s.revision() == rev + 1);
    CHECK(s.services()[1].id == "ws_2");
    const auto m = build_quality_matrix(s.services(), s.schema(), kMode);
    CHECK(m.at(1, 5) == 90.0);
  }
  SUBCASE("removing ws_3 hands scheme 2 to ws_1") {
    s.remove_service("ws_3");
    CHECK(s.revision() == rev + 1);
    const auto r = match(weather_request(kCase2), s.find_by_function({"weather"}), s.schema());
    REQUIRE(r.ranking.size() == 3);
    CHECK(r.winner()->id == "ws_1");
    // Stats are recomputed over the three remaining candidates.
    CHECK(r.find("ws_1")->distance == doctest::Approx(0.8545497003).epsilon(1e-9));
    CHECK(r.find("ws_2")->distance == doctest::Approx(1.0242513512).epsilon(1e-9));
    CHECK(r.find("ws_4")->distance == doctest::Approx(0.9185840804).epsilon(1e-9));
  }
  SUBCASE("unknown ids") {
    CHECK(code_of([&] { s.get_service("nope"); }) == Errc::UnknownId);
    CHECK(code_of([&] { s.remove_service("nope"); }) == Errc::UnknownId);
    CHECK(code_of([&] { s.update_service("nope", weather_service(0)); }) == Errc::UnknownId);
    CHECK(s.revision() == rev);
  }
  SUBCASE("register then remove restores the service set") {
    const auto before = s.services();
    auto extra = weather_service(0);
    extra.id = "extra";
    s.register_service(extra);
    s.remove_service("extra");
    CHECK(s.services() == before);
    CHECK(s.revision() == rev + 2);
  }
}

TEST_CASE("save and load") {
  TempDir dir;
  const auto path = dir.path / "registry.qos";

  SUBCASE("round trip") {
    auto s = weather_store();
    s.remove_service("ws_2");
    save_store(s, path);
    const auto loaded = load_store(path, weather_schema());
    CHECK(loaded == s);
    CHECK(loaded.revision() == 5);
    CHECK(loaded.services()[1].id == "ws_3");
  }
  SUBCASE("doubles survive bit-exactly") {
    RegistryStore s(weather_schema());
    auto r = weather_service(0);
    r.profiles[kMode].values["cost"] = 0.1 + 0.2;
    r.profiles[kMode].values["response_time"] = 1.0 / 3.0;
    s.register_service(r);
    save_store(s, path);
    const auto loaded = load_store(path);
    CHECK(loaded.get_service("ws_1").profiles.at(kMode).get("cost") == 0.1 + 0.2);
    CHECK(loaded.get_service("ws_1").profiles.at(kMode).get("response_time") == 1.0 / 3.0);
  }
  SUBCASE("direction flags map to min/max") {
    write(path, R"({"version":"1","schema":[
      {"name":"scalability","direction":"max","unit":""},{"name":"response_time","direction":"min","unit":""},
      {"name":"throughput","direction":"max","unit":""},{"name":"availability","direction":"max","unit":""},
      {"name":"accessibility","direction":"max","unit":""},{"name":"cost","direction":"min","unit":""}],
      "services":[]})");
    const auto loaded = load_store(path);
    CHECK(loaded.schema().direction_flags() == std::vector<int>{1, 0, 1, 1, 1, 0});
    CHECK(loaded.revision() == 0);
  }
  SUBCASE("version must be 1") {
    write(path, R"({"version":"2","schema":[{"name":"a","direction":"min","unit":""}],"services":[]})");
    CHECK(code_of([&] { load_store(path); }) == Errc::MalformedDocument);
  }
  SUBCASE("unknown fields are rejected") {
    write(path, R"({"version":"1","schema":[{"name":"a","direction":"min","unit":""}],"services":[],"extra":1})");
    CHECK(code_of([&] { load_store(path); }) == Errc::UnknownField);
    write(path, R"({"version":"1","schema":[{"name":"a","direction":"min","unit":"","nr":0}],"services":[]})");
    CHECK(code_of([&] { load_store(path); }) == Errc::UnknownField);
  }
  SUBCASE("malformed documents") {
    write(path, "{not json");
    CHECK(code_of([&] { load_store(path); }) == Errc::MalformedDocument);
    write(path, R"({"version":"1","schema":[{"name":"a","direction":"up","unit":""}],"services":[]})");
    CHECK(code_of([&] { load_store(path); }) == Errc::MalformedDocument);
    write(path, R"({"version":"1","schema":[{"name":"a","direction":"min","unit":""}],
                    "services":[{"id":"x","profiles":{"default":{"a":"fast"}}}]})");
    CHECK(code_of([&] { load_store(path); }) == Errc::MalformedDocument);
  }
  SUBCASE("schema mismatch") {
    save_store(weather_store(), path);
    CHECK(code_of([&] { load_store(path, validate_schema({{"cost", Direction::Minimize, ""}})); }) ==
          Errc::SchemaMismatch);
  }
  SUBCASE("io failure") {
    CHECK(code_of([&] { load_store(dir.path / "missing.qos"); }) == Errc::IoFailure);
    CHECK(code_of([&] { save_store(weather_store(), dir.path / "no-such-dir" / "x.qos"); }) == Errc::IoFailure);
  }
}

TEST_CASE("SharedRegistry publishes snapshots") {
  SharedRegistry reg{RegistryStore(weather_schema())};
  auto before = reg.snapshot();
  reg.mutate([](RegistryStore& s) { s.register_service(weather_service(0)); });
  CHECK(before->size() == 0);
  CHECK(reg.snapshot()->size() == 1);

  // A throwing writer publishes nothing.
  CHECK_THROWS(reg.mutate([](RegistryStore& s) {
    s.register_service(weather_service(1));
    s.register_service(weather_service(1));
  }));
  CHECK(reg.snapshot()->size() == 1);
  CHECK(reg.snapshot()->revision() == 1);
}

TEST_CASE("SharedRegistry serializes concurrent writers") {
  SharedRegistry reg{RegistryStore(weather_schema())};
  constexpr int kThreads = 8;
  constexpr int kPer = 25;
  std::vector<std::thread> pool;
  for (int t = 0; t < kThreads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = 0; i < kPer; ++i) {
        auto r = weather_service(static_cast<std::size_t>(i % 4));
        r.id = "t" + std::to_string(t) + "-" + std::to_string(i);
        reg.mutate([&](RegistryStore& s) { s.register_service(r); });
        const auto snap = reg.snapshot();
        CHECK(snap->revision() == snap->size());
      }
    });
  }
  for (auto& th : pool) th.join();
  CHECK(reg.snapshot()->size() == kThreads * kPer);
  CHECK(reg.snapshot()->revision() == kThreads * kPer);
}
