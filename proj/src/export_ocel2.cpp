#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ochub/errors.hpp"
#include "ochub/exporters.hpp"
#include "ochub/timestamp.hpp"
#include "sqlite.hpp"

namespace ochub::exporters {

namespace fs = std::filesystem;
using sqlite::quote_ident;

std::string ExportSummary::to_text() const {
  std::ostringstream out;
  out << "exported " << format << " to " << this->out.string() << '\n';
  for (const auto& [name, n] : rows) out << "  " << name << ": " << n << " rows\n";
  if (format == "flat") out << "  duplication factor: " << duplication_factor << '\n';
  for (const auto& note : notes) out << "  note: " << note << '\n';
  return out.str();
}

std::string sanitize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_');
  }
  return out.empty() ? "_" : out;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string declared_type(const std::string& datatype) {
  if (datatype == "integer") return "INTEGER";
  if (datatype == "float") return "REAL";
  if (datatype == "boolean") return "BOOLEAN";
  if (datatype == "timestamp") return "TIMESTAMP";
  return "TEXT";
}

// Sanitized, collision-free table suffixes in input order.
class NameAllocator {
 public:
  std::string allocate(std::string_view original) {
    std::string base = sanitize_name(original);
    std::string name = base;
    for (int n = 2; used_.count(name); ++n) name = base + "_" + std::to_string(n);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

std::string canonical_time(const std::string& text, const std::string& what) {
  auto t = parse_timestamp(text);
  if (!t) throw FormatError("cannot export " + what + ": invalid timestamp '" + text + "'");
  return format_timestamp(*t);
}

template <typename Attr>
void check_columns(const std::vector<const Attr*>& attrs, std::initializer_list<const char*> reserved,
                   const std::string& owner, const char* kind) {
  std::set<std::string> seen;
  for (const char* r : reserved) seen.insert(r);
  for (const auto* a : attrs) {
    if (!seen.insert(lower(a->description)).second) {
      throw FormatError(std::string(kind) + " attribute name collision after sanitization: '" + a->description +
                        "' in type '" + owner + "'");
    }
  }
}

class Inserter {
 public:
  Inserter(sqlite::Database& db, const std::string& table, std::size_t columns)
      : st_(db, insert_sql(table, columns)) {}

  void row(const std::vector<Field>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) st_.bind(static_cast<int>(i + 1), values[i]);
    st_.step();
    st_.reset();
    ++count_;
  }
  std::size_t count() const { return count_; }

 private:
  static std::string insert_sql(const std::string& table, std::size_t columns) {
    std::string sql = "INSERT INTO " + quote_ident(table) + " VALUES (";
    for (std::size_t i = 0; i < columns; ++i) sql += i ? ",?" : "?";
    return sql + ")";
  }
  sqlite::Statement st_;
  std::size_t count_ = 0;
};

}  // namespace

ExportSummary export_ocel2(const Batch& data, const fs::path& out) {
  ExportSummary summary;
  summary.format = "ocel2";
  summary.out = out;
  summary.files.push_back(out.string());

  std::error_code ec;
  if (out.has_parent_path()) fs::create_directories(out.parent_path(), ec);
  fs::remove(out, ec);
  for (const char* suffix : {"-wal", "-shm", "-journal"}) fs::remove(out.string() + suffix, ec);

  sqlite::Database db(out, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  db.exec("PRAGMA journal_mode=DELETE");
  db.exec("BEGIN");

  db.exec("CREATE TABLE event (ocel_id TEXT PRIMARY KEY, ocel_type TEXT)");
  db.exec("CREATE TABLE object (ocel_id TEXT PRIMARY KEY, ocel_type TEXT)");
  db.exec("CREATE TABLE event_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT)");
  db.exec("CREATE TABLE object_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT)");
  db.exec("CREATE TABLE event_object (ocel_event_id TEXT, ocel_object_id TEXT, ocel_qualifier TEXT)");
  db.exec("CREATE TABLE object_object (ocel_source_id TEXT, ocel_target_id TEXT, ocel_qualifier TEXT)");

  std::unordered_map<std::string, const EventType*> event_types;
  std::unordered_map<std::string, const ObjectType*> object_types;
  for (const auto& t : data.event_types) event_types.emplace(t.id, &t);
  for (const auto& t : data.object_types) object_types.emplace(t.id, &t);

  // Types are written under their descriptions; two types sharing one would merge.
  auto check_unique_names = [](const auto& types, const char* kind) {
    std::set<std::string> names;
    for (const auto& t : types) {
      if (!names.insert(t.description).second) {
        throw FormatError(std::string("two ") + kind + " types share the name '" + t.description + "'");
      }
    }
  };
  check_unique_names(data.event_types, "event");
  check_unique_names(data.object_types, "object");

  // Event tables: one pivot per type.
  std::map<std::string, std::vector<const EventAttribute*>> attrs_of_event_type;
  for (const auto& a : data.event_attributes) attrs_of_event_type[a.event_type_id].push_back(&a);
  std::map<std::string, std::vector<const Event*>> events_of_type;
  for (const auto& e : data.events) events_of_type[e.event_type_id].push_back(&e);
  std::unordered_map<std::string, std::map<std::string, const EventAttributeValue*>> values_of_event;
  std::size_t dropped_values = 0;
  for (const auto& v : data.event_attribute_values) {
    auto& slot = values_of_event[v.event_id][v.event_attribute_id];
    if (slot) ++dropped_values;
    if (!slot || v.id > slot->id) slot = &v;
  }

  {
    NameAllocator names;
    Inserter map_rows(db, "event_map_type", 2);
    Inserter master(db, "event", 2);
    std::vector<const EventType*> types;
    for (const auto& t : data.event_types) types.push_back(&t);
    std::sort(types.begin(), types.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const EventType* type : types) {
      std::string map = names.allocate(type->description);
      map_rows.row({type->description, map});
      auto& attrs = attrs_of_event_type[type->id];
      std::sort(attrs.begin(), attrs.end(), [](auto* a, auto* b) { return a->id < b->id; });
      check_columns(attrs, {"ocel_id", "ocel_time"}, type->description, "event");

      std::string table = "event_" + map;
      std::string ddl = "CREATE TABLE " + quote_ident(table) + " (ocel_id TEXT PRIMARY KEY, ocel_time TIMESTAMP";
      for (const auto* a : attrs) ddl += ", " + quote_ident(a->description) + " " + declared_type(a->datatype);
      db.exec(ddl + ")");

      Inserter rows(db, table, attrs.size() + 2);
      auto& events = events_of_type[type->id];
      std::sort(events.begin(), events.end(), [](auto* a, auto* b) { return a->id < b->id; });
      for (const Event* e : events) {
        std::vector<Field> row{e->id, canonical_time(e->timestamp, "event " + e->id)};
        const auto& values = values_of_event[e->id];
        for (const auto* a : attrs) {
          auto it = values.find(a->id);
          row.push_back(it == values.end() ? Field{} : Field{it->second->attribute_value});
        }
        rows.row(row);
        master.row({e->id, type->description});
      }
      summary.rows[table] = rows.count();
    }
    summary.rows["event"] = master.count();
    for (const auto& e : data.events) {
      if (!event_types.count(e.event_type_id)) {
        throw FormatError("cannot export event '" + e.id + "': unknown event type '" + e.event_type_id + "'");
      }
    }
  }

  // Object tables: attribute history.
  std::map<std::string, std::vector<const ObjectAttribute*>> attrs_of_object_type;
  for (const auto& a : data.object_attributes) attrs_of_object_type[a.object_type_id].push_back(&a);
  std::unordered_map<std::string, const ObjectAttribute*> object_attribute;
  for (const auto& a : data.object_attributes) object_attribute.emplace(a.id, &a);
  std::map<std::string, std::vector<const ObjectRecord*>> objects_of_type;
  for (const auto& o : data.objects) objects_of_type[o.object_type_id].push_back(&o);
  std::unordered_map<std::string, std::vector<const ObjectAttributeValue*>> values_of_object;
  for (const auto& v : data.object_attribute_values) values_of_object[v.object_id].push_back(&v);

  {
    NameAllocator names;
    Inserter map_rows(db, "object_map_type", 2);
    Inserter master(db, "object", 2);
    std::vector<const ObjectType*> types;
    for (const auto& t : data.object_types) types.push_back(&t);
    std::sort(types.begin(), types.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const ObjectType* type : types) {
      std::string map = names.allocate(type->description);
      map_rows.row({type->description, map});
      auto& attrs = attrs_of_object_type[type->id];
      std::sort(attrs.begin(), attrs.end(), [](auto* a, auto* b) { return a->id < b->id; });
      check_columns(attrs, {"ocel_id", "ocel_time", "ocel_changed_field"}, type->description, "object");
      std::map<std::string, std::size_t> column_of;
      for (std::size_t i = 0; i < attrs.size(); ++i) column_of[attrs[i]->id] = i + 3;

      std::string table = "object_" + map;
      std::string ddl =
          "CREATE TABLE " + quote_ident(table) + " (ocel_id TEXT, ocel_time TIMESTAMP, ocel_changed_field TEXT";
      for (const auto* a : attrs) ddl += ", " + quote_ident(a->description) + " " + declared_type(a->datatype);
      db.exec(ddl + ")");

      Inserter rows(db, table, attrs.size() + 3);
      auto& objects = objects_of_type[type->id];
      std::sort(objects.begin(), objects.end(), [](auto* a, auto* b) { return a->id < b->id; });
      for (const ObjectRecord* o : objects) {
        master.row({o->id, type->description});
        struct Item {
          std::string time;
          const ObjectAttributeValue* value;
          std::size_t column;
        };
        std::vector<Item> items;
        for (const auto* v : values_of_object[o->id]) {
          auto c = column_of.find(v->object_attribute_id);
          if (c == column_of.end()) continue;  // attribute of another type; transform check reports it
          items.push_back({canonical_time(v->timestamp, "object attribute value " + v->id), v, c->second});
        }
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
          return std::tie(a.time, a.column, a.value->id) < std::tie(b.time, b.column, b.value->id);
        });
        std::vector<Field> initial(attrs.size() + 3);
        bool has_initial = false;
        std::vector<std::vector<Field>> changes;
        for (const auto& item : items) {
          if (item.time == kEpochSentinel && !initial[item.column]) {
            initial[item.column] = item.value->attribute_value;
            has_initial = true;
            continue;
          }
          std::vector<Field> row(attrs.size() + 3);
          row[0] = o->id;
          row[1] = item.time;
          row[2] = attrs[item.column - 3]->description;
          row[item.column] = item.value->attribute_value;
          changes.push_back(std::move(row));
        }
        if (has_initial) {
          initial[0] = o->id;
          initial[1] = std::string(kEpochSentinel);
          rows.row(initial);
        }
        for (const auto& row : changes) rows.row(row);
      }
      summary.rows[table] = rows.count();
    }
    summary.rows["object"] = master.count();
  }

  {
    Inserter e2o(db, "event_object", 3);
    std::vector<const EventToObject*> rows;
    for (const auto& r : data.event_to_object) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) {
      return std::tie(a->event_id, a->object_id, a->qualifier_value, a->id) <
             std::tie(b->event_id, b->object_id, b->qualifier_value, b->id);
    });
    for (const auto* r : rows) e2o.row({r->event_id, r->object_id, r->qualifier_value});
    summary.rows["event_object"] = e2o.count();
  }

  {
    std::unordered_map<std::string, std::string> qualifier_name;
    for (const auto& q : data.relation_qualifiers) qualifier_name.emplace(q.id, q.description);
    std::set<std::tuple<std::string, std::string, std::string>> flattened;
    for (const auto& r : data.object_to_object) {
      auto q = qualifier_name.find(r.qualifier_id);
      flattened.emplace(r.source_object_id, r.target_object_id, q == qualifier_name.end() ? r.qualifier_id : q->second);
    }
    Inserter o2o(db, "object_object", 3);
    for (const auto& [s, t, q] : flattened) o2o.row({s, t, q});
    summary.rows["object_object"] = o2o.count();
    if (flattened.size() != data.object_to_object.size()) {
      summary.notes.push_back(std::to_string(data.object_to_object.size()) +
                              " temporal object-to-object rows flattened into " + std::to_string(flattened.size()) +
                              " static relations");
    }
  }

  if (!data.event_to_object_attribute_value.empty()) {
    summary.notes.push_back(std::to_string(data.event_to_object_attribute_value.size()) +
                            " event-to-object-attribute-value relations not representable in OCEL 2.0, dropped");
  }
  if (dropped_values) {
    summary.notes.push_back(std::to_string(dropped_values) + " repeated event attribute values dropped by the pivot");
  }

  db.exec("COMMIT");
  return summary;
}

ExportSummary export_ocel2(const HubStore& store, const fs::path& out) { return export_ocel2(store.snapshot(), out); }

}  // namespace ochub::exporters
