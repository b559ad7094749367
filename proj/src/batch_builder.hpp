#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "ochub/errors.hpp"
#include "ochub/importers.hpp"

namespace ochub::importers {

/// Accumulates rows while keeping ids unique per table.
class BatchBuilder {
 public:
  enum class OnClash {
    kError,   // same id, different content: FormatError
    kSuffix,  // same id, different content: retry as id#2, id#3, ...
  };

  /// Adds `row` unless an identical row is already present. Returns the id
  /// under which the row is stored.
  template <typename Row>
  std::string add(Row row, OnClash on_clash = OnClash::kError, const std::string& file = {},
                  std::size_t line = 0) {
    constexpr Table table = RowTraits<Row>::table;
    auto& rows = table_rows<Row>();
    auto& index = index_[static_cast<std::size_t>(table)];
    const std::string base = row.id;
    for (int n = 2;; ++n) {
      auto it = index.find(row.id);
      if (it == index.end()) break;
      Row candidate = row;
      if (rows[it->second] == candidate) return row.id;
      if (on_clash == OnClash::kError) {
        throw FormatError((file.empty() ? std::string() : file + ":" + std::to_string(line) + ": ") +
                          "duplicate id '" + row.id + "' in " + std::string(table_name(table)));
      }
      row.id = base + "#" + std::to_string(n);
    }
    index.emplace(row.id, rows.size());
    if (!file.empty()) result_.origins.push_back({table, row.id, file, line});
    std::string id = row.id;
    rows.push_back(std::move(row));
    return id;
  }

  template <typename Row>
  bool contains(const std::string& id) const {
    return index_[static_cast<std::size_t>(RowTraits<Row>::table)].count(id) > 0;
  }

  void skip(const std::string& file, std::size_t line, std::string reason) {
    result_.skipped.push_back({file, line, std::move(reason)});
  }

  ImportResult& result() { return result_; }

 private:
  template <typename Row>
  std::vector<Row>& table_rows() {
    Batch& b = result_.batch;
    if constexpr (std::is_same_v<Row, EventType>) return b.event_types;
    else if constexpr (std::is_same_v<Row, EventAttribute>) return b.event_attributes;
    else if constexpr (std::is_same_v<Row, Event>) return b.events;
    else if constexpr (std::is_same_v<Row, EventAttributeValue>) return b.event_attribute_values;
    else if constexpr (std::is_same_v<Row, ObjectType>) return b.object_types;
    else if constexpr (std::is_same_v<Row, ObjectAttribute>) return b.object_attributes;
    else if constexpr (std::is_same_v<Row, ObjectRecord>) return b.objects;
    else if constexpr (std::is_same_v<Row, ObjectAttributeValue>) return b.object_attribute_values;
    else if constexpr (std::is_same_v<Row, RelationQualifier>) return b.relation_qualifiers;
    else if constexpr (std::is_same_v<Row, ObjectToObject>) return b.object_to_object;
    else if constexpr (std::is_same_v<Row, EventToObject>) return b.event_to_object;
    else return b.event_to_object_attribute_value;
  }

  ImportResult result_;
  std::array<std::unordered_map<std::string, std::size_t>, kTableCount> index_;
};

std::string now_utc_text();

}  // namespace ochub::importers
