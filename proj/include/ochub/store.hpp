#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ochub/schema.hpp"

namespace ochub {

inline constexpr int kLayoutVersion = 1;

/// Rows newly written per table by one append.
struct AppendSummary {
  std::array<std::size_t, kTableCount> added{};
  /// Logical clock value assigned to the batch; unchanged when nothing was added.
  std::int64_t batch_seq = 0;

  std::size_t total() const;
  std::size_t operator[](Table t) const { return added[static_cast<std::size_t>(t)]; }
};

/// Table name -> ordered column names, as the database reports them.
using SchemaInventory = std::map<std::string, std::vector<std::string>>;

/// Durable, append-only instance of the twelve-table hub.
///
/// One writer at a time; any number of readers. Rows are never updated or
/// deleted once appended. A batch is applied in a single transaction, so a
/// reader sees either none or all of it.
class HubStore {
 public:
  /// Opens the store in directory `dir`. With `create_if_missing` a fresh
  /// store is initialised there; otherwise a missing store raises
  /// NotFoundError("store not found: ...").
  static HubStore open(const std::filesystem::path& dir, bool create_if_missing);

  HubStore(HubStore&&) noexcept;
  HubStore& operator=(HubStore&&) noexcept;
  ~HubStore();

  /// Appends every row of `batch`. Rows whose id already exists with
  /// identical content are skipped. A row whose id exists with different
  /// content raises ConflictError and leaves the store untouched.
  AppendSummary append(const Batch& batch);

  /// Full read of all tables, each sorted by id.
  Batch snapshot() const;

  std::size_t count(Table table) const;
  std::optional<std::vector<Field>> find(Table table, const std::string& id) const;

  /// Every table and its columns as currently present in the database.
  SchemaInventory inventory() const;

  /// Number of appends that added at least one row.
  std::int64_t batch_count() const;

  const std::filesystem::path& path() const;

 private:
  struct Impl;
  explicit HubStore(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// Name of the database file inside a store directory.
inline constexpr const char* kStoreFileName = "hub.sqlite";

}  // namespace ochub
