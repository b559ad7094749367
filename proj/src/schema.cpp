#include "ochub/schema.hpp"

#include <algorithm>

#include "ochub/errors.hpp"

namespace ochub {

const std::array<TableSpec, kTableCount>& schema() {
  static const std::array<TableSpec, kTableCount> tables = {{
      {Table::kEventTypes, "event_types", {{"id"}, {"description"}}},
      {Table::kEventAttributes,
       "event_attributes",
       {{"id"}, {"event_type_id", false, Table::kEventTypes}, {"description"}, {"datatype"}}},
      {Table::kEvents,
       "events",
       {{"id"},
        {"event_type_id", false, Table::kEventTypes},
        {"timestamp", false, std::nullopt, true},
        {"description", true}}},
      {Table::kEventAttributeValues,
       "event_attribute_values",
       {{"id"},
        {"event_id", false, Table::kEvents},
        {"event_attribute_id", false, Table::kEventAttributes},
        {"attribute_value"}}},
      {Table::kObjectTypes, "object_types", {{"id"}, {"description"}}},
      {Table::kObjectAttributes,
       "object_attributes",
       {{"id"}, {"object_type_id", false, Table::kObjectTypes}, {"description"}, {"datatype"}}},
      {Table::kObjects, "objects", {{"id"}, {"object_type_id", false, Table::kObjectTypes}, {"description", true}}},
      {Table::kObjectAttributeValues,
       "object_attribute_values",
       {{"id"},
        {"object_id", false, Table::kObjects},
        {"object_attribute_id", false, Table::kObjectAttributes},
        {"timestamp", false, std::nullopt, true},
        {"attribute_value"}}},
      {Table::kRelationQualifiers, "relation_qualifiers", {{"id"}, {"description"}, {"datatype"}}},
      {Table::kObjectToObject,
       "object_to_object",
       {{"id"},
        {"source_object_id", false, Table::kObjects},
        {"target_object_id", false, Table::kObjects},
        {"timestamp", false, std::nullopt, true},
        {"qualifier_id", false, Table::kRelationQualifiers},
        {"qualifier_value", true}}},
      {Table::kEventToObject,
       "event_to_object",
       {{"id"},
        {"event_id", false, Table::kEvents},
        {"object_id", false, Table::kObjects},
        {"qualifier_id", false, Table::kRelationQualifiers},
        {"qualifier_value"}}},
      {Table::kEventToObjectAttributeValue,
       "event_to_object_attribute_value",
       {{"id"},
        {"event_id", false, Table::kEvents},
        {"object_attribute_value_id", false, Table::kObjectAttributeValues},
        {"qualifier_id", false, Table::kRelationQualifiers},
        {"qualifier_value"}}},
  }};
  return tables;
}

const TableSpec& spec(Table table) { return schema()[static_cast<std::size_t>(table)]; }

std::string_view table_name(Table table) { return spec(table).name; }

std::optional<Table> table_from_name(std::string_view name) {
  for (const auto& t : schema()) {
    if (t.name == name) return t.table;
  }
  return std::nullopt;
}

bool is_datatype(std::string_view value) {
  return std::find(kDatatypes.begin(), kDatatypes.end(), value) != kDatatypes.end();
}

namespace {

// Empty text stands for NULL in non-nullable columns; the quality checks flag it.
std::string text(const Field& f) { return f.value_or(std::string{}); }

const Field& at(const std::vector<Field>& fields, std::size_t i) {
  static const Field null;
  return i < fields.size() ? fields[i] : null;
}

}  // namespace

std::vector<Field> RowTraits<EventType>::to_fields(const EventType& r) { return {r.id, r.description}; }
EventType RowTraits<EventType>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1))};
}

std::vector<Field> RowTraits<EventAttribute>::to_fields(const EventAttribute& r) {
  return {r.id, r.event_type_id, r.description, r.datatype};
}
EventAttribute RowTraits<EventAttribute>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3))};
}

std::vector<Field> RowTraits<Event>::to_fields(const Event& r) {
  return {r.id, r.event_type_id, r.timestamp, r.description};
}
Event RowTraits<Event>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), at(f, 3)};
}

std::vector<Field> RowTraits<EventAttributeValue>::to_fields(const EventAttributeValue& r) {
  return {r.id, r.event_id, r.event_attribute_id, r.attribute_value};
}
EventAttributeValue RowTraits<EventAttributeValue>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3))};
}

std::vector<Field> RowTraits<ObjectType>::to_fields(const ObjectType& r) { return {r.id, r.description}; }
ObjectType RowTraits<ObjectType>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1))};
}

std::vector<Field> RowTraits<ObjectAttribute>::to_fields(const ObjectAttribute& r) {
  return {r.id, r.object_type_id, r.description, r.datatype};
}
ObjectAttribute RowTraits<ObjectAttribute>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3))};
}

std::vector<Field> RowTraits<ObjectRecord>::to_fields(const ObjectRecord& r) {
  return {r.id, r.object_type_id, r.description};
}
ObjectRecord RowTraits<ObjectRecord>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), at(f, 2)};
}

std::vector<Field> RowTraits<ObjectAttributeValue>::to_fields(const ObjectAttributeValue& r) {
  return {r.id, r.object_id, r.object_attribute_id, r.timestamp, r.attribute_value};
}
ObjectAttributeValue RowTraits<ObjectAttributeValue>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3)), text(at(f, 4))};
}

std::vector<Field> RowTraits<RelationQualifier>::to_fields(const RelationQualifier& r) {
  return {r.id, r.description, r.datatype};
}
RelationQualifier RowTraits<RelationQualifier>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2))};
}

std::vector<Field> RowTraits<ObjectToObject>::to_fields(const ObjectToObject& r) {
  return {r.id, r.source_object_id, r.target_object_id, r.timestamp, r.qualifier_id, r.qualifier_value};
}
ObjectToObject RowTraits<ObjectToObject>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3)), text(at(f, 4)), at(f, 5)};
}

std::vector<Field> RowTraits<EventToObject>::to_fields(const EventToObject& r) {
  return {r.id, r.event_id, r.object_id, r.qualifier_id, r.qualifier_value};
}
EventToObject RowTraits<EventToObject>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3)), text(at(f, 4))};
}

std::vector<Field> RowTraits<EventToObjectAttributeValue>::to_fields(const EventToObjectAttributeValue& r) {
  return {r.id, r.event_id, r.object_attribute_value_id, r.qualifier_id, r.qualifier_value};
}
EventToObjectAttributeValue RowTraits<EventToObjectAttributeValue>::from_fields(const std::vector<Field>& f) {
  return {text(at(f, 0)), text(at(f, 1)), text(at(f, 2)), text(at(f, 3)), text(at(f, 4))};
}

std::size_t Batch::size(Table table) const {
  std::size_t n = 0;
  std::size_t index = 0;
  for_each_table([&](const auto& rows) {
    if (index++ == static_cast<std::size_t>(table)) n = rows.size();
  });
  return n;
}

std::size_t Batch::total_rows() const {
  std::size_t n = 0;
  for_each_table([&](const auto& rows) { n += rows.size(); });
  return n;
}

void Batch::extend(const Batch& other) {
  auto append = [](auto& into, const auto& from) { into.insert(into.end(), from.begin(), from.end()); };
  append(event_types, other.event_types);
  append(event_attributes, other.event_attributes);
  append(events, other.events);
  append(event_attribute_values, other.event_attribute_values);
  append(object_types, other.object_types);
  append(object_attributes, other.object_attributes);
  append(objects, other.objects);
  append(object_attribute_values, other.object_attribute_values);
  append(relation_qualifiers, other.relation_qualifiers);
  append(object_to_object, other.object_to_object);
  append(event_to_object, other.event_to_object);
  append(event_to_object_attribute_value, other.event_to_object_attribute_value);
}

void Batch::canonicalize() {
  for_each_table([](auto& rows) {
    using Row = typename std::decay_t<decltype(rows)>::value_type;
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.id != b.id) return a.id < b.id;
      return RowTraits<Row>::to_fields(a) < RowTraits<Row>::to_fields(b);
    });
  });
}

std::vector<std::vector<Field>> Batch::rows(Table table) const {
  std::vector<std::vector<Field>> out;
  std::size_t index = 0;
  for_each_table([&](const auto& rows) {
    if (index++ != static_cast<std::size_t>(table)) return;
    using Row = typename std::decay_t<decltype(rows)>::value_type;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(RowTraits<Row>::to_fields(r));
  });
  return out;
}

void Batch::add_row(Table table, const std::vector<Field>& fields) {
  if (fields.size() != spec(table).columns.size()) {
    throw FormatError("row for " + std::string(table_name(table)) + " has " + std::to_string(fields.size()) +
                      " cells, expected " + std::to_string(spec(table).columns.size()));
  }
  std::size_t index = 0;
  for_each_table([&](auto& rows) {
    if (index++ != static_cast<std::size_t>(table)) return;
    using Row = typename std::decay_t<decltype(rows)>::value_type;
    rows.push_back(RowTraits<Row>::from_fields(fields));
  });
}

}  // namespace ochub
