#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qosbroker/model.hpp"

namespace qosbroker {

/// Service records keyed by id, kept in registration order. Every successful
/// mutation bumps the revision by exactly one.
class RegistryStore {
 public:
  explicit RegistryStore(QosSchema schema, std::uint64_t revision = 0)
      : schema_(std::move(schema)), revision_(revision) {}

  /// Rebuilds a persisted store without touching its revision. Records are
  /// validated as on registration.
  static RegistryStore restore(QosSchema schema, std::vector<ServiceRecord> records,
                               std::uint64_t revision);

  const QosSchema& schema() const noexcept { return schema_; }
  std::uint64_t revision() const noexcept { return revision_; }
  std::size_t size() const noexcept { return services_.size(); }
  const std::vector<ServiceRecord>& services() const noexcept { return services_; }

  /// Throws DuplicateId, EmptyId, NoProfiles, UnknownProperty, NonFiniteValue.
  void register_service(ServiceRecord record);
  /// Replaces in place; registration position is kept. Throws UnknownId.
  void update_service(std::string_view id, ServiceRecord record);
  void remove_service(std::string_view id);
  const ServiceRecord& get_service(std::string_view id) const;

  /// Records whose tags are a superset of `tags`, in registration order.
  std::vector<ServiceRecord> find_by_function(const std::set<std::string>& tags) const;

  bool operator==(const RegistryStore&) const = default;

 private:
  std::vector<ServiceRecord>::const_iterator locate(std::string_view id) const;

  QosSchema schema_;
  std::vector<ServiceRecord> services_;
  std::uint64_t revision_ = 0;
};

/// Throws IoFailure.
void save_store(const RegistryStore& store, const std::filesystem::path& path);

/// Throws IoFailure, MalformedDocument, UnknownField, or SchemaMismatch when
/// `expected` is given and differs from the document's schema.
RegistryStore load_store(const std::filesystem::path& path,
                         const std::optional<QosSchema>& expected = std::nullopt);

/// Single-writer, multi-reader holder. Readers take an immutable snapshot;
/// writers mutate a copy under a lock and publish it.
class SharedRegistry {
 public:
  explicit SharedRegistry(RegistryStore initial);

  std::shared_ptr<const RegistryStore> snapshot() const;

  /// Applies `fn` to a copy of the current store and publishes the result if
  /// `fn` returns normally. Returns the published snapshot.
  std::shared_ptr<const RegistryStore> mutate(const std::function<void(RegistryStore&)>& fn);

 private:
  mutable std::mutex read_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const RegistryStore> current_;
};

}  // namespace qosbroker
