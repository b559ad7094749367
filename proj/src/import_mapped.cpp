#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "batch_builder.hpp"
#include "json.hpp"
#include "ochub/csv.hpp"
#include "ochub/importers.hpp"
#include "ochub/timestamp.hpp"

namespace ochub::importers {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
    throw FormatError("mapping config: " + where + " needs a non-empty string '" + key + "'");
  }
  return j[key].get<std::string>();
}

std::string optional_key(const json& j, const char* key, std::string fallback = {}) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_string()) throw FormatError(std::string("mapping config: '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<MappingConfig::Attribute> parse_attributes(const json& j, const std::string& where) {
  std::vector<MappingConfig::Attribute> out;
  if (!j.contains("attributes")) return out;
  for (const auto& a : j["attributes"]) {
    MappingConfig::Attribute attr;
    attr.name = required(a, "name", where + " attribute");
    attr.column = optional_key(a, "column", attr.name);
    attr.datatype = optional_key(a, "datatype", "string");
    attr.timestamp_column = optional_key(a, "timestamp_column");
    if (!is_datatype(attr.datatype)) {
      throw FormatError("mapping config: " + where + " attribute '" + attr.name + "' has unknown datatype '" +
                        attr.datatype + "'");
    }
    out.push_back(std::move(attr));
  }
  return out;
}

const json& list(const json& j, const char* key) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  if (!j[key].is_array()) throw FormatError(std::string("mapping config: '") + key + "' must be a list");
  return j[key];
}

// CSV source files are read once and shared between specs.
class Sources {
 public:
  explicit Sources(fs::path dir) : dir_(std::move(dir)) {}

  const csv::Table& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    fs::path file = dir_ / name;
    if (!fs::exists(file)) throw NotFoundError("mapping source not found: " + file.string());
    return cache_.emplace(name, csv::read(file)).first->second;
  }

  std::size_t column(const std::string& source, const std::string& column) {
    auto i = get(source).column(column);
    if (i == std::string::npos) throw FormatError(source + ": missing source column '" + column + "'");
    return i;
  }

 private:
  fs::path dir_;
  std::map<std::string, csv::Table> cache_;
};

std::string timestamp_at(const csv::Table& t, std::size_t row, std::size_t col, const std::string& source) {
  const auto& cell = t.rows[row][col];
  auto parsed = parse_timestamp(cell);
  if (!parsed) {
    throw FormatError(source + ":" + std::to_string(t.lines[row]) + ": cannot parse timestamp '" + cell + "' in column '" +
                      t.header[col] + "'");
  }
  return format_timestamp(*parsed);
}

std::string scoped(const std::string& type, const std::string& source_id) { return type + ":" + source_id; }

}  // namespace

MappingConfig MappingConfig::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("mapping config is not valid JSON: ") + e.what());
  }
  MappingConfig c;
  c.name = optional_key(j, "name", "mapping");
  for (const auto& e : list(j, "event_types")) {
    EventTypeSpec s;
    s.name = required(e, "name", "event type");
    std::string where = "event type '" + s.name + "'";
    s.source = required(e, "source", where);
    s.id_column = required(e, "id_column", where);
    s.timestamp_column = required(e, "timestamp_column", where);
    s.description_column = optional_key(e, "description_column");
    s.attributes = parse_attributes(e, where);
    c.event_types.push_back(std::move(s));
  }
  for (const auto& o : list(j, "object_types")) {
    ObjectTypeSpec s;
    s.name = required(o, "name", "object type");
    std::string where = "object type '" + s.name + "'";
    s.source = required(o, "source", where);
    s.id_column = required(o, "id_column", where);
    s.description_column = optional_key(o, "description_column");
    s.attributes = parse_attributes(o, where);
    for (const auto& u : list(o, "updates")) {
      AttributeUpdates up;
      up.source = required(u, "source", where + " update");
      up.id_column = required(u, "id_column", where + " update");
      up.attribute = required(u, "attribute", where + " update");
      up.value_column = optional_key(u, "value_column", up.attribute);
      up.timestamp_column = required(u, "timestamp_column", where + " update");
      std::string datatype = optional_key(u, "datatype", "string");
      if (!is_datatype(datatype)) throw FormatError("mapping config: unknown datatype '" + datatype + "'");
      s.update_datatypes.emplace(up.attribute, datatype);
      s.updates.push_back(std::move(up));
    }
    c.object_types.push_back(std::move(s));
  }
  for (const auto& r : list(j, "event_to_object")) {
    EventToObjectSpec s;
    s.source = required(r, "source", "event_to_object");
    s.event_type = required(r, "event_type", "event_to_object");
    s.event_column = required(r, "event_column", "event_to_object");
    s.object_type = required(r, "object_type", "event_to_object");
    s.object_column = required(r, "object_column", "event_to_object");
    s.qualifier = required(r, "qualifier", "event_to_object");
    s.value_column = optional_key(r, "value_column");
    c.event_to_object.push_back(std::move(s));
  }
  for (const auto& r : list(j, "object_to_object")) {
    ObjectToObjectSpec s;
    s.source = required(r, "source", "object_to_object");
    s.source_type = required(r, "source_type", "object_to_object");
    s.source_column = required(r, "source_column", "object_to_object");
    s.target_type = required(r, "target_type", "object_to_object");
    s.target_column = required(r, "target_column", "object_to_object");
    s.qualifier = required(r, "qualifier", "object_to_object");
    s.timestamp_column = optional_key(r, "timestamp_column");
    s.value_column = optional_key(r, "value_column");
    c.object_to_object.push_back(std::move(s));
  }
  for (const auto& r : list(j, "event_to_object_attribute_value")) {
    EventToValueSpec s;
    s.source = required(r, "source", "event_to_object_attribute_value");
    s.event_type = required(r, "event_type", "event_to_object_attribute_value");
    s.event_column = required(r, "event_column", "event_to_object_attribute_value");
    s.object_type = required(r, "object_type", "event_to_object_attribute_value");
    s.object_column = required(r, "object_column", "event_to_object_attribute_value");
    s.attribute = required(r, "attribute", "event_to_object_attribute_value");
    s.timestamp_column = required(r, "timestamp_column", "event_to_object_attribute_value");
    s.qualifier = required(r, "qualifier", "event_to_object_attribute_value");
    c.event_to_object_attribute_value.push_back(std::move(s));
  }

  // Relations must point at declared types.
  std::set<std::string> event_types, object_types;
  for (const auto& e : c.event_types) event_types.insert(e.name);
  for (const auto& o : c.object_types) object_types.insert(o.name);
  auto need = [](const std::set<std::string>& known, const std::string& name, const char* what) {
    if (!known.count(name)) throw FormatError(std::string("mapping config: undeclared ") + what + " '" + name + "'");
  };
  for (const auto& r : c.event_to_object) {
    need(event_types, r.event_type, "event type");
    need(object_types, r.object_type, "object type");
  }
  for (const auto& r : c.object_to_object) {
    need(object_types, r.source_type, "object type");
    need(object_types, r.target_type, "object type");
  }
  for (const auto& r : c.event_to_object_attribute_value) {
    need(event_types, r.event_type, "event type");
    need(object_types, r.object_type, "object type");
  }
  return c;
}

MappingConfig MappingConfig::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("mapping config not found: " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

ImportResult import_mapped_csv(const MappingConfig& config, const fs::path& sources_dir) {
  Sources sources(sources_dir);
  BatchBuilder out;
  out.result().provenance = {"mapped:" + config.name, sources_dir.string(), now_utc_text()};
  using OnClash = BatchBuilder::OnClash;

  // Rows of each source that produced at least one hub row.
  std::map<std::string, std::vector<bool>> used;
  auto mark = [&](const std::string& source, std::size_t row) {
    auto& flags = used[source];
    flags.resize(sources.get(source).rows.size(), false);
    flags[row] = true;
  };
  auto touch = [&](const std::string& source) { used[source].resize(sources.get(source).rows.size(), false); };

  auto qualifier = [&](const std::string& name) {
    out.add(RelationQualifier{ids::qualifier(name), name, "string"});
    return ids::qualifier(name);
  };

  // Step 1: events.
  for (const auto& spec : config.event_types) {
    out.add(EventType{ids::event_type(spec.name), spec.name});
    for (const auto& a : spec.attributes) {
      out.add(EventAttribute{ids::event_attribute(spec.name, a.name), ids::event_type(spec.name), a.name, a.datatype});
    }
    const auto& t = sources.get(spec.source);
    touch(spec.source);
    auto id_col = sources.column(spec.source, spec.id_column);
    auto ts_col = sources.column(spec.source, spec.timestamp_column);
    auto desc_col = spec.description_column.empty() ? std::string::npos
                                                    : sources.column(spec.source, spec.description_column);
    std::vector<std::size_t> attr_cols;
    for (const auto& a : spec.attributes) attr_cols.push_back(sources.column(spec.source, a.column));

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row[id_col].empty()) {
        out.skip(spec.source, t.lines[r], "empty id for event type '" + spec.name + "'");
        continue;
      }
      std::string id = scoped(spec.name, row[id_col]);
      if (out.contains<Event>(id)) {
        throw FormatError(spec.source + ":" + std::to_string(t.lines[r]) + ": duplicate id '" + row[id_col] +
                          "' for event type '" + spec.name + "'");
      }
      Field description = desc_col == std::string::npos ? Field{} : Field{row[desc_col]};
      out.add(Event{id, ids::event_type(spec.name), timestamp_at(t, r, ts_col, spec.source), description},
              OnClash::kError, spec.source, t.lines[r]);
      mark(spec.source, r);
      for (std::size_t i = 0; i < spec.attributes.size(); ++i) {
        const auto& cell = row[attr_cols[i]];
        if (cell.empty()) continue;
        const auto& a = spec.attributes[i];
        out.add(EventAttributeValue{ids::event_value(id, a.name), id, ids::event_attribute(spec.name, a.name), cell},
                OnClash::kError, spec.source, t.lines[r]);
      }
    }
  }

  // Step 4 (objects and attributes); objects must exist before relations refer to them.
  for (const auto& spec : config.object_types) {
    out.add(ObjectType{ids::object_type(spec.name), spec.name});
    for (const auto& a : spec.attributes) {
      out.add(
          ObjectAttribute{ids::object_attribute(spec.name, a.name), ids::object_type(spec.name), a.name, a.datatype});
    }
    for (const auto& [name, datatype] : spec.update_datatypes) {
      auto id = ids::object_attribute(spec.name, name);
      if (!out.contains<ObjectAttribute>(id)) out.add(ObjectAttribute{id, ids::object_type(spec.name), name, datatype});
    }

    const auto& t = sources.get(spec.source);
    touch(spec.source);
    auto id_col = sources.column(spec.source, spec.id_column);
    auto desc_col = spec.description_column.empty() ? std::string::npos
                                                    : sources.column(spec.source, spec.description_column);
    std::vector<std::size_t> value_cols, time_cols;
    for (const auto& a : spec.attributes) {
      value_cols.push_back(sources.column(spec.source, a.column));
      time_cols.push_back(a.timestamp_column.empty() ? std::string::npos
                                                     : sources.column(spec.source, a.timestamp_column));
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row[id_col].empty()) {
        out.skip(spec.source, t.lines[r], "empty id for object type '" + spec.name + "'");
        continue;
      }
      std::string id = scoped(spec.name, row[id_col]);
      if (out.contains<ObjectRecord>(id)) {
        throw FormatError(spec.source + ":" + std::to_string(t.lines[r]) + ": duplicate id '" + row[id_col] +
                          "' for object type '" + spec.name + "'");
      }
      Field description = desc_col == std::string::npos ? Field{} : Field{row[desc_col]};
      out.add(ObjectRecord{id, ids::object_type(spec.name), description}, OnClash::kError, spec.source, t.lines[r]);
      mark(spec.source, r);
      for (std::size_t i = 0; i < spec.attributes.size(); ++i) {
        const auto& cell = row[value_cols[i]];
        if (cell.empty()) continue;
        const auto& a = spec.attributes[i];
        std::string ts = time_cols[i] == std::string::npos ? std::string(kEpochSentinel)
                                                           : timestamp_at(t, r, time_cols[i], spec.source);
        out.add(ObjectAttributeValue{ids::object_value(id, a.name, ts), id, ids::object_attribute(spec.name, a.name), ts,
                                     cell},
                OnClash::kSuffix, spec.source, t.lines[r]);
      }
    }

    for (const auto& up : spec.updates) {
      const auto& u = sources.get(up.source);
      touch(up.source);
      auto uid = sources.column(up.source, up.id_column);
      auto uval = sources.column(up.source, up.value_column);
      auto uts = sources.column(up.source, up.timestamp_column);
      for (std::size_t r = 0; r < u.rows.size(); ++r) {
        const auto& row = u.rows[r];
        if (row[uid].empty() || row[uval].empty()) {
          out.skip(up.source, u.lines[r], "empty object id or value for update of '" + up.attribute + "'");
          continue;
        }
        std::string id = scoped(spec.name, row[uid]);
        std::string ts = timestamp_at(u, r, uts, up.source);
        out.add(ObjectAttributeValue{ids::object_value(id, up.attribute, ts), id,
                                     ids::object_attribute(spec.name, up.attribute), ts, row[uval]},
                OnClash::kSuffix, up.source, u.lines[r]);
        mark(up.source, r);
      }
    }
  }

  // Step 2: event-to-object.
  for (const auto& spec : config.event_to_object) {
    const auto& t = sources.get(spec.source);
    touch(spec.source);
    auto ecol = sources.column(spec.source, spec.event_column);
    auto ocol = sources.column(spec.source, spec.object_column);
    auto vcol = spec.value_column.empty() ? std::string::npos : sources.column(spec.source, spec.value_column);
    std::string q = qualifier(spec.qualifier);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row[ecol].empty() || row[ocol].empty()) {
        out.skip(spec.source, t.lines[r], "empty key for event_to_object '" + spec.qualifier + "'");
        continue;
      }
      std::string e = scoped(spec.event_type, row[ecol]);
      std::string o = scoped(spec.object_type, row[ocol]);
      std::string value = vcol == std::string::npos ? spec.qualifier : row[vcol];
      out.add(EventToObject{"e2o:" + e + ":" + o + ":" + spec.qualifier, e, o, q, value}, OnClash::kSuffix,
              spec.source, t.lines[r]);
      mark(spec.source, r);
    }
  }

  // Step 3: object-to-object.
  for (const auto& spec : config.object_to_object) {
    const auto& t = sources.get(spec.source);
    touch(spec.source);
    auto scol = sources.column(spec.source, spec.source_column);
    auto tcol = sources.column(spec.source, spec.target_column);
    auto tscol = spec.timestamp_column.empty() ? std::string::npos
                                               : sources.column(spec.source, spec.timestamp_column);
    auto vcol = spec.value_column.empty() ? std::string::npos : sources.column(spec.source, spec.value_column);
    std::string q = qualifier(spec.qualifier);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row[scol].empty() || row[tcol].empty()) {
        out.skip(spec.source, t.lines[r], "empty key for object_to_object '" + spec.qualifier + "'");
        continue;
      }
      std::string s = scoped(spec.source_type, row[scol]);
      std::string g = scoped(spec.target_type, row[tcol]);
      std::string ts =
          tscol == std::string::npos ? std::string(kEpochSentinel) : timestamp_at(t, r, tscol, spec.source);
      Field value = spec.qualifier;
      if (vcol != std::string::npos) value = row[vcol].empty() ? Field{} : Field{row[vcol]};
      out.add(ObjectToObject{"o2o:" + s + ":" + g + ":" + spec.qualifier + "@" + ts, s, g, ts, q, value},
              OnClash::kSuffix, spec.source, t.lines[r]);
      mark(spec.source, r);
    }
  }

  // Step 5: event-to-object-attribute-value.
  for (const auto& spec : config.event_to_object_attribute_value) {
    const auto& t = sources.get(spec.source);
    touch(spec.source);
    auto ecol = sources.column(spec.source, spec.event_column);
    auto ocol = sources.column(spec.source, spec.object_column);
    auto tscol = sources.column(spec.source, spec.timestamp_column);
    std::string q = qualifier(spec.qualifier);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      if (row[ecol].empty() || row[ocol].empty()) {
        out.skip(spec.source, t.lines[r], "empty key for event_to_object_attribute_value '" + spec.qualifier + "'");
        continue;
      }
      std::string e = scoped(spec.event_type, row[ecol]);
      std::string o = scoped(spec.object_type, row[ocol]);
      std::string ts = timestamp_at(t, r, tscol, spec.source);
      std::string value_id = ids::object_value(o, spec.attribute, ts);
      out.add(EventToObjectAttributeValue{"e2oav:" + e + ":" + value_id + ":" + spec.qualifier, e, value_id, q,
                                          spec.qualifier},
              OnClash::kSuffix, spec.source, t.lines[r]);
      mark(spec.source, r);
    }
  }

  // Rows of a named source that fed nothing are reported, never dropped silently.
  std::set<std::pair<std::string, std::size_t>> reported;
  for (const auto& s : out.result().skipped) reported.emplace(s.file, s.line);
  for (const auto& [source, flags] : used) {
    const auto& t = sources.get(source);
    for (std::size_t r = 0; r < flags.size(); ++r) {
      if (!flags[r] && !reported.count({source, t.lines[r]})) out.skip(source, t.lines[r], "row produced no hub rows");
    }
  }
  return std::move(out.result());
}

}  // namespace ochub::importers
