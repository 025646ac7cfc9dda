#pragma once

#include <array>
#include <string>
#include <vector>

#include "qosbroker/model.hpp"

// The four-service weather scenario used throughout the suites.
namespace qosbroker::testing {

inline const std::array<const char*, 6> kProps = {"scalability",  "response_time", "throughput",
                                                  "availability", "accessibility", "cost"};
inline constexpr const char* kMode = "WHM/NTM";

inline QosSchema weather_schema() {
  return validate_schema({{"scalability", Direction::Maximize, "ratio"},
                          {"response_time", Direction::Minimize, "ms"},
                          {"throughput", Direction::Maximize, "requests/s"},
                          {"availability", Direction::Maximize, "ratio"},
                          {"accessibility", Direction::Maximize, "ratio"},
                          {"cost", Direction::Minimize, "currency units"}});
}

inline const std::array<std::array<double, 6>, 4> kTable1 = {{
    {0.9, 10, 100, 1.0, 0.9, 500},
    {0.0, 15, 30, 0.8, 0.6, 100},
    {0.3, 5, 20, 0.6, 0.9, 200},
    {1.0, 20, 200, 0.9, 1.0, 300},
}};

inline const std::array<std::array<double, 6>, 4> kTable2 = {{
    {0.90, 0.67, 0.44, 1.00, 0.75, 0.00},
    {0.00, 0.33, 0.06, 0.50, 0.00, 1.00},
    {0.30, 1.00, 0.00, 0.00, 0.75, 0.75},
    {1.00, 0.00, 1.00, 0.75, 1.00, 0.50},
}};

inline const std::array<double, 6> kRequest = {0.9, 20, 50, 0.9, 1, 200};
inline const std::array<double, 6> kRequestNorm = {0.90, 0.00, 0.17, 0.75, 1.00, 0.75};
inline const std::array<double, 6> kCase1 = {0.9, 1, 0.6, 0.4, 0.6, 0.1};
inline const std::array<double, 6> kCase2 = {0.9, 0.1, 1, 0.1, 0.2, 0.9};

inline QosProfile profile_of(const std::array<double, 6>& row) {
  QosProfile p;
  for (std::size_t i = 0; i < row.size(); ++i) p.values[kProps[i]] = row[i];
  return p;
}

inline ServiceRecord weather_service(std::size_t i) {
  ServiceRecord r;
  r.id = "ws_" + std::to_string(i + 1);
  r.display_name = "Weather service " + std::to_string(i + 1);
  r.functional_tags = {"weather"};
  r.profiles[kMode] = profile_of(kTable1[i]);
  return r;
}

inline std::vector<ServiceRecord> weather_services() {
  std::vector<ServiceRecord> out;
  for (std::size_t i = 0; i < kTable1.size(); ++i) out.push_back(weather_service(i));
  return out;
}

inline std::map<std::string, double, std::less<>> weights_of(const std::array<double, 6>& w) {
  std::map<std::string, double, std::less<>> out;
  for (std::size_t i = 0; i < w.size(); ++i) out[kProps[i]] = w[i];
  return out;
}

inline MatchRequest weather_request(const std::array<double, 6>& weights, std::size_t top_k = 4) {
  MatchRequest req;
  req.functional_tags = {"weather"};
  req.mode = kMode;
  req.requirements = profile_of(kRequest);
  req.weights = weights_of(weights);
  req.top_k = top_k;
  return req;
}

}  // namespace qosbroker::testing
