#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <set>

#include "batch_builder.hpp"
#include "ochub/importers.hpp"
#include "ochub/timestamp.hpp"
#include "sqlite.hpp"

namespace ochub::importers {

namespace fs = std::filesystem;

std::string now_utc_text() {
  auto now = std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return format_timestamp(now.time_since_epoch().count());
}

namespace ids {
std::string event_type(std::string_view name) { return "et:" + std::string(name); }
std::string event_attribute(std::string_view type, std::string_view name) {
  return "ea:" + std::string(type) + ":" + std::string(name);
}
std::string object_type(std::string_view name) { return "ot:" + std::string(name); }
std::string object_attribute(std::string_view type, std::string_view name) {
  return "oa:" + std::string(type) + ":" + std::string(name);
}
std::string qualifier(std::string_view name) { return "q:" + std::string(name); }
std::string object_value(std::string_view object_id, std::string_view attribute, std::string_view timestamp) {
  return "oav:" + std::string(object_id) + ":" + std::string(attribute) + "@" + std::string(timestamp);
}
std::string event_value(std::string_view event_id, std::string_view attribute) {
  return "eav:" + std::string(event_id) + ":" + std::string(attribute);
}
}  // namespace ids

bool is_null_literal(const std::optional<std::string>& cell) {
  if (!cell) return true;
  if (cell->size() != 4) return false;
  std::string lower;
  for (char c : *cell) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "null";
}

namespace {

constexpr const char* kMandatoryTables[] = {"event", "object", "event_map_type", "object_map_type", "event_object",
                                            "object_object"};

std::string datatype_of(std::string declared) {
  std::transform(declared.begin(), declared.end(), declared.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (declared.find("INT") != std::string::npos) return "integer";
  if (declared.find("BOOL") != std::string::npos) return "boolean";
  if (declared.find("REAL") != std::string::npos || declared.find("FLOA") != std::string::npos ||
      declared.find("DOUB") != std::string::npos || declared.find("NUMERIC") != std::string::npos ||
      declared.find("DECIMAL") != std::string::npos) {
    return "float";
  }
  if (declared.find("TIME") != std::string::npos || declared.find("DATE") != std::string::npos) return "timestamp";
  return "string";
}

struct Column {
  std::string name;
  std::string datatype;
};

std::vector<Column> columns_of(sqlite::Database& db, const std::string& table) {
  std::vector<Column> out;
  sqlite::Statement st(db, "PRAGMA table_info(" + sqlite::quote_ident(table) + ")");
  while (st.step()) out.push_back({*st.text(1), datatype_of(st.text(2).value_or(""))});
  return out;
}

std::string require_time(const std::optional<std::string>& cell, const std::string& where) {
  if (is_null_literal(cell)) throw FormatError(where + ": missing ocel_time");
  auto t = parse_timestamp(*cell);
  if (!t) throw FormatError(where + ": unparseable timestamp '" + *cell + "'");
  return format_timestamp(*t);
}

// (type name, table name) pairs from a *_map_type table, in type order.
std::vector<std::pair<std::string, std::string>> type_map(sqlite::Database& db, const char* table) {
  std::vector<std::pair<std::string, std::string>> out;
  sqlite::Statement st(db, std::string("SELECT ocel_type, ocel_type_map FROM ") + table + " ORDER BY ocel_type");
  while (st.step()) out.emplace_back(st.text(0).value_or(""), st.text(1).value_or(""));
  return out;
}

}  // namespace

ImportResult import_ocel2(const fs::path& file) {
  if (!fs::exists(file)) throw NotFoundError("OCEL 2.0 file not found: " + file.string());
  sqlite::Database db(file, SQLITE_OPEN_READONLY);
  for (const char* t : kMandatoryTables) {
    if (!db.has_table(t)) throw FormatError(file.string() + ": missing mandatory OCEL 2.0 table '" + t + "'");
  }

  BatchBuilder out;
  const std::string fname = file.filename().string();
  out.result().provenance = {"ocel2", file.string(), now_utc_text()};
  using OnClash = BatchBuilder::OnClash;

  // Event types, their attribute columns, and per-type event rows.
  std::map<std::string, std::string> event_time;
  for (const auto& [type, map] : type_map(db, "event_map_type")) {
    out.add(EventType{ids::event_type(type), type});
    std::string table = "event_" + map;
    if (!db.has_table(table)) continue;
    std::vector<Column> attrs;
    for (auto& c : columns_of(db, table)) {
      if (c.name == "ocel_id" || c.name == "ocel_time") continue;
      out.add(EventAttribute{ids::event_attribute(type, c.name), ids::event_type(type), c.name, c.datatype});
      attrs.push_back(std::move(c));
    }
    sqlite::Statement st(db, "SELECT * FROM " + sqlite::quote_ident(table) + " ORDER BY ocel_id");
    std::map<std::string, int> index;
    for (int i = 0; i < st.columns(); ++i) index[st.column_name(i)] = i;
    while (st.step()) {
      std::string id = st.text(index["ocel_id"]).value_or("");
      event_time[id] = require_time(st.text(index["ocel_time"]), fname + " " + table + " " + id);
      for (const auto& a : attrs) {
        auto cell = st.text(index[a.name]);
        if (is_null_literal(cell)) continue;
        out.add(EventAttributeValue{ids::event_value(id, a.name), id, ids::event_attribute(type, a.name), *cell},
                OnClash::kSuffix);
      }
    }
  }

  {
    sqlite::Statement st(db, "SELECT rowid, ocel_id, ocel_type FROM event ORDER BY ocel_id");
    while (st.step()) {
      std::string id = st.text(1).value_or("");
      std::string type = st.text(2).value_or("");
      auto t = event_time.find(id);
      if (t == event_time.end()) {
        throw FormatError(fname + ": event '" + id + "' has no row in its event_<type> table");
      }
      if (!out.contains<EventType>(ids::event_type(type))) out.add(EventType{ids::event_type(type), type});
      out.add(Event{id, ids::event_type(type), t->second, std::nullopt}, OnClash::kError, fname,
              static_cast<std::size_t>(st.integer(0)));
    }
  }

  // Object types, attribute columns, and value history.
  for (const auto& [type, map] : type_map(db, "object_map_type")) {
    out.add(ObjectType{ids::object_type(type), type});
    std::string table = "object_" + map;
    if (!db.has_table(table)) continue;
    std::vector<Column> attrs;
    bool has_changed_field = false;
    for (auto& c : columns_of(db, table)) {
      if (c.name == "ocel_id" || c.name == "ocel_time") continue;
      if (c.name == "ocel_changed_field") {
        has_changed_field = true;
        continue;
      }
      out.add(ObjectAttribute{ids::object_attribute(type, c.name), ids::object_type(type), c.name, c.datatype});
      attrs.push_back(std::move(c));
    }
    std::string order = has_changed_field ? "ocel_id, ocel_time, ocel_changed_field, rowid" : "ocel_id, ocel_time, rowid";
    sqlite::Statement st(db, "SELECT rowid AS ocel_rowid, * FROM " + sqlite::quote_ident(table) + " ORDER BY " + order);
    std::map<std::string, int> index;
    for (int i = 0; i < st.columns(); ++i) index.emplace(st.column_name(i), i);
    while (st.step()) {
      std::string id = st.text(index["ocel_id"]).value_or("");
      auto line = static_cast<std::size_t>(st.integer(0));
      std::string time = require_time(st.text(index["ocel_time"]), fname + " " + table + " " + id);
      std::optional<std::string> changed;
      if (has_changed_field) {
        changed = st.text(index["ocel_changed_field"]);
        if (changed && (changed->empty() || is_null_literal(changed))) changed.reset();
      }
      std::size_t emitted = 0;
      for (const auto& a : attrs) {
        if (changed && *changed != a.name) continue;
        auto cell = st.text(index[a.name]);
        if (is_null_literal(cell)) continue;
        out.add(ObjectAttributeValue{ids::object_value(id, a.name, time), id, ids::object_attribute(type, a.name),
                                     time, *cell},
                OnClash::kSuffix, fname, line);
        ++emitted;
      }
      if (emitted == 0) {
        out.skip(fname, line,
                 table + " row for '" + id + "' carries no value" + (changed ? " for field '" + *changed + "'" : ""));
      }
    }
  }

  {
    sqlite::Statement st(db, "SELECT rowid, ocel_id, ocel_type FROM object ORDER BY ocel_id");
    while (st.step()) {
      std::string id = st.text(1).value_or("");
      std::string type = st.text(2).value_or("");
      if (!out.contains<ObjectType>(ids::object_type(type))) out.add(ObjectType{ids::object_type(type), type});
      out.add(ObjectRecord{id, ids::object_type(type), std::nullopt}, OnClash::kError, fname,
              static_cast<std::size_t>(st.integer(0)));
    }
  }

  auto qualifier = [&](const std::string& name) {
    out.add(RelationQualifier{ids::qualifier(name), name, "string"});
    return ids::qualifier(name);
  };

  {
    sqlite::Statement st(db,
                         "SELECT rowid, ocel_event_id, ocel_object_id, ocel_qualifier FROM event_object "
                         "ORDER BY ocel_event_id, ocel_object_id, ocel_qualifier, rowid");
    while (st.step()) {
      std::string e = st.text(1).value_or("");
      std::string o = st.text(2).value_or("");
      std::string q = is_null_literal(st.text(3)) ? std::string() : *st.text(3);
      out.add(EventToObject{"e2o:" + e + ":" + o + ":" + q, e, o, qualifier(q), q}, OnClash::kSuffix, fname,
              static_cast<std::size_t>(st.integer(0)));
    }
  }
  {
    sqlite::Statement st(db,
                         "SELECT rowid, ocel_source_id, ocel_target_id, ocel_qualifier FROM object_object "
                         "ORDER BY ocel_source_id, ocel_target_id, ocel_qualifier, rowid");
    while (st.step()) {
      std::string s = st.text(1).value_or("");
      std::string t = st.text(2).value_or("");
      std::string q = is_null_literal(st.text(3)) ? std::string() : *st.text(3);
      // Identical static relations collapse into one row.
      out.add(ObjectToObject{"o2o:" + s + ":" + t + ":" + q, s, t, std::string(kEpochSentinel), qualifier(q), q},
              OnClash::kSuffix, fname, static_cast<std::size_t>(st.integer(0)));
    }
  }
  return std::move(out.result());
}

}  // namespace ochub::importers
