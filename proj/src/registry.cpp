#include "qosbroker/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qosbroker/document.hpp"
#include "qosbroker/error.hpp"

namespace qosbroker {

std::vector<ServiceRecord>::const_iterator RegistryStore::locate(std::string_view id) const {
  return std::find_if(services_.begin(), services_.end(),
                      [&](const ServiceRecord& r) { return r.id == id; });
}

RegistryStore RegistryStore::restore(QosSchema schema, std::vector<ServiceRecord> records,
                                     std::uint64_t revision) {
  RegistryStore store(std::move(schema));
  for (auto& r : records) store.register_service(std::move(r));
  store.revision_ = revision;
  return store;
}

void RegistryStore::register_service(ServiceRecord record) {
  record = validate_record(std::move(record), schema_);
  if (locate(record.id) != services_.end())
    throw Error(Errc::DuplicateId, record.id, "service '" + record.id + "' is already registered");
  services_.push_back(std::move(record));
  ++revision_;
}

void RegistryStore::update_service(std::string_view id, ServiceRecord record) {
  auto it = locate(id);
  if (it == services_.end())
    throw Error(Errc::UnknownId, std::string(id), "no service '" + std::string(id) + "'");
  if (record.id.empty()) record.id = std::string(id);
  if (record.id != id)
    throw Error(Errc::UnknownId, record.id, "record id does not match '" + std::string(id) + "'");
  record = validate_record(std::move(record), schema_);
  services_[static_cast<std::size_t>(it - services_.begin())] = std::move(record);
  ++revision_;
}

void RegistryStore::remove_service(std::string_view id) {
  auto it = locate(id);
  if (it == services_.end())
    throw Error(Errc::UnknownId, std::string(id), "no service '" + std::string(id) + "'");
  services_.erase(it);
  ++revision_;
}

const ServiceRecord& RegistryStore::get_service(std::string_view id) const {
  auto it = locate(id);
  if (it == services_.end())
    throw Error(Errc::UnknownId, std::string(id), "no service '" + std::string(id) + "'");
  return *it;
}

std::vector<ServiceRecord> RegistryStore::find_by_function(const std::set<std::string>& tags) const {
  const auto query = normalize_tags(tags);
  std::vector<ServiceRecord> out;
  for (const auto& r : services_) {
    if (std::includes(r.functional_tags.begin(), r.functional_tags.end(), query.begin(),
                      query.end()))
      out.push_back(r);
  }
  return out;
}

void save_store(const RegistryStore& store, const std::filesystem::path& path) {
  const std::string text = store_to_json(store).dump(2) + "\n";
  // Write-then-rename so a crash never leaves a truncated store behind.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, path.string(), "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(Errc::IoFailure, path.string(), "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoFailure, path.string(), "cannot replace " + path.string() + ": " + ec.message());
}

RegistryStore load_store(const std::filesystem::path& path, const std::optional<QosSchema>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, path.string(), "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RegistryStore store = store_from_json(parse_document(buf.str()));
  if (expected && !(store.schema() == *expected))
    throw Error(Errc::SchemaMismatch, path.string(),
                "schema in " + path.string() + " differs from the expected schema");
  return store;
}

SharedRegistry::SharedRegistry(RegistryStore initial)
    : current_(std::make_shared<const RegistryStore>(std::move(initial))) {}

std::shared_ptr<const RegistryStore> SharedRegistry::snapshot() const {
  std::lock_guard lock(read_mutex_);
  return current_;
}

std::shared_ptr<const RegistryStore> SharedRegistry::mutate(
    const std::function<void(RegistryStore&)>& fn) {
  std::lock_guard writer(write_mutex_);
  auto next = std::make_shared<RegistryStore>(*snapshot());
  fn(*next);
  std::shared_ptr<const RegistryStore> published = std::move(next);
  {
    std::lock_guard lock(read_mutex_);
    current_ = published;
  }
  return published;
}

}  // namespace qosbroker
