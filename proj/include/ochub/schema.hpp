#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ochub {

/// A nullable text cell. Every column of the hub is stored as text.
using Field = std::optional<std::string>;

/// The twelve tables of the hub, in dependency order.
enum class Table : std::size_t {
  kEventTypes,
  kEventAttributes,
  kEvents,
  kEventAttributeValues,
  kObjectTypes,
  kObjectAttributes,
  kObjects,
  kObjectAttributeValues,
  kRelationQualifiers,
  kObjectToObject,
  kEventToObject,
  kEventToObjectAttributeValue,
};

inline constexpr std::size_t kTableCount = 12;

struct ColumnSpec {
  std::string_view name;
  bool nullable = false;
  /// Referenced table for foreign-key columns.
  std::optional<Table> references = std::nullopt;
  bool timestamp = false;
};

struct TableSpec {
  Table table;
  std::string_view name;
  std::vector<ColumnSpec> columns;
};

/// Fixed, process-agnostic layout. Column 0 is always `id`.
const std::array<TableSpec, kTableCount>& schema();
const TableSpec& spec(Table table);
std::string_view table_name(Table table);
std::optional<Table> table_from_name(std::string_view name);

inline constexpr std::array<std::string_view, 5> kDatatypes = {"string", "integer", "float", "boolean",
                                                                "timestamp"};
bool is_datatype(std::string_view value);

struct EventType {
  std::string id;
  std::string description;
  bool operator==(const EventType&) const = default;
};

struct EventAttribute {
  std::string id;
  std::string event_type_id;
  std::string description;
  std::string datatype;
  bool operator==(const EventAttribute&) const = default;
};

struct Event {
  std::string id;
  std::string event_type_id;
  std::string timestamp;
  Field description;
  bool operator==(const Event&) const = default;
};

struct EventAttributeValue {
  std::string id;
  std::string event_id;
  std::string event_attribute_id;
  std::string attribute_value;
  bool operator==(const EventAttributeValue&) const = default;
};

struct ObjectType {
  std::string id;
  std::string description;
  bool operator==(const ObjectType&) const = default;
};

struct ObjectAttribute {
  std::string id;
  std::string object_type_id;
  std::string description;
  std::string datatype;
  bool operator==(const ObjectAttribute&) const = default;
};

struct ObjectRecord {
  std::string id;
  std::string object_type_id;
  Field description;
  bool operator==(const ObjectRecord&) const = default;
};

struct ObjectAttributeValue {
  std::string id;
  std::string object_id;
  std::string object_attribute_id;
  std::string timestamp;
  std::string attribute_value;
  bool operator==(const ObjectAttributeValue&) const = default;
};

struct RelationQualifier {
  std::string id;
  std::string description;
  std::string datatype;
  bool operator==(const RelationQualifier&) const = default;
};

/// A NULL qualifier_value terminates the relation from `timestamp` on.
struct ObjectToObject {
  std::string id;
  std::string source_object_id;
  std::string target_object_id;
  std::string timestamp;
  std::string qualifier_id;
  Field qualifier_value;
  bool operator==(const ObjectToObject&) const = default;
};

struct EventToObject {
  std::string id;
  std::string event_id;
  std::string object_id;
  std::string qualifier_id;
  std::string qualifier_value;
  bool operator==(const EventToObject&) const = default;
};

struct EventToObjectAttributeValue {
  std::string id;
  std::string event_id;
  std::string object_attribute_value_id;
  std::string qualifier_id;
  std::string qualifier_value;
  bool operator==(const EventToObjectAttributeValue&) const = default;
};

/// Row <-> generic cell conversion for each table.
template <typename Row>
struct RowTraits;

#define OCHUB_ROW_TRAITS(RowType, TableId)                        \
  template <>                                                     \
  struct RowTraits<RowType> {                                     \
    static constexpr Table table = TableId;                       \
    static std::vector<Field> to_fields(const RowType& row);      \
    static RowType from_fields(const std::vector<Field>& fields); \
  };

OCHUB_ROW_TRAITS(EventType, Table::kEventTypes)
OCHUB_ROW_TRAITS(EventAttribute, Table::kEventAttributes)
OCHUB_ROW_TRAITS(Event, Table::kEvents)
OCHUB_ROW_TRAITS(EventAttributeValue, Table::kEventAttributeValues)
OCHUB_ROW_TRAITS(ObjectType, Table::kObjectTypes)
OCHUB_ROW_TRAITS(ObjectAttribute, Table::kObjectAttributes)
OCHUB_ROW_TRAITS(ObjectRecord, Table::kObjects)
OCHUB_ROW_TRAITS(ObjectAttributeValue, Table::kObjectAttributeValues)
OCHUB_ROW_TRAITS(RelationQualifier, Table::kRelationQualifiers)
OCHUB_ROW_TRAITS(ObjectToObject, Table::kObjectToObject)
OCHUB_ROW_TRAITS(EventToObject, Table::kEventToObject)
OCHUB_ROW_TRAITS(EventToObjectAttributeValue, Table::kEventToObjectAttributeValue)

#undef OCHUB_ROW_TRAITS

/// The unit of ingestion: rows for any subset of the twelve tables.
struct Batch {
  std::vector<EventType> event_types;
  std::vector<EventAttribute> event_attributes;
  std::vector<Event> events;
  std::vector<EventAttributeValue> event_attribute_values;
  std::vector<ObjectType> object_types;
  std::vector<ObjectAttribute> object_attributes;
  std::vector<ObjectRecord> objects;
  std::vector<ObjectAttributeValue> object_attribute_values;
  std::vector<RelationQualifier> relation_qualifiers;
  std::vector<ObjectToObject> object_to_object;
  std::vector<EventToObject> event_to_object;
  std::vector<EventToObjectAttributeValue> event_to_object_attribute_value;

  bool operator==(const Batch&) const = default;

  std::size_t size(Table table) const;
  std::size_t total_rows() const;
  bool empty() const { return total_rows() == 0; }

  /// Appends all rows of `other`.
  void extend(const Batch& other);

  /// Sorts every table by id (stable on ties) so batches compare by content.
  void canonicalize();

  /// Generic row access, in insertion order.
  std::vector<std::vector<Field>> rows(Table table) const;
  void add_row(Table table, const std::vector<Field>& fields);

  /// Calls `f(table_vector)` for each of the twelve tables in schema order.
  template <typename F>
  void for_each_table(F&& f) {
    f(event_types), f(event_attributes), f(events), f(event_attribute_values);
    f(object_types), f(object_attributes), f(objects), f(object_attribute_values);
    f(relation_qualifiers), f(object_to_object), f(event_to_object), f(event_to_object_attribute_value);
  }
  template <typename F>
  void for_each_table(F&& f) const {
    f(event_types), f(event_attributes), f(events), f(event_attribute_values);
    f(object_types), f(object_attributes), f(objects), f(object_attribute_values);
    f(relation_qualifiers), f(object_to_object), f(event_to_object), f(event_to_object_attribute_value);
  }
};

/// Batch with the provenance importers attach to it.
struct SourceProvenance {
  std::string format;
  std::string file;
  std::string imported_at;
};

}  // namespace ochub
