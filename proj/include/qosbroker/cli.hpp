#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qosbroker/model.hpp"

namespace qosbroker::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kEnvironment = 2 };

enum class Output { Table, Document };

struct CliConfig {
  std::filesystem::path store_path = "./registry.qos";
  std::string address = "127.0.0.1:8080";
  Output output = Output::Table;
  /// Schema for a store that does not exist yet.
  std::optional<std::filesystem::path> schema_path;
};

/// scalability, response_time, throughput, availability, accessibility, cost.
QosSchema default_schema();

int cmd_register(const CliConfig& cfg, const std::filesystem::path& file, std::ostream& out,
                 std::ostream& err);
int cmd_match(const CliConfig& cfg, const std::filesystem::path& request_file,
              std::optional<std::size_t> top, bool explain, std::ostream& out, std::ostream& err);
int cmd_compare(const CliConfig& cfg, const std::filesystem::path& request_file,
                const std::filesystem::path& weights_file, std::ostream& out, std::ostream& err);
/// Blocks until SIGINT/SIGTERM, then persists the store.
int cmd_serve(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point: `qosbroker register|match|compare|serve ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qosbroker::cli
