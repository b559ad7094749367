#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "ochub/csv.hpp"
#include "ochub/errors.hpp"
#include "ochub/exporters.hpp"
#include "ochub/timestamp.hpp"

namespace ochub::exporters {

namespace fs = std::filesystem;

namespace {

std::string canonical_time(const std::string& text, const std::string& what) {
  auto t = parse_timestamp(text);
  if (!t) throw FormatError("cannot export " + what + ": invalid timestamp '" + text + "'");
  return format_timestamp(*t);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

// Event attribute values keyed by event, then attribute description. When an
// event carries several values for one attribute the greatest id wins.
std::unordered_map<std::string, std::map<std::string, std::string>> event_attribute_columns(
    const Batch& data, std::set<std::string>& names) {
  std::unordered_map<std::string, const EventAttribute*> attribute;
  for (const auto& a : data.event_attributes) attribute.emplace(a.id, &a);
  std::unordered_map<std::string, std::map<std::string, const EventAttributeValue*>> best;
  for (const auto& v : data.event_attribute_values) {
    auto a = attribute.find(v.event_attribute_id);
    if (a == attribute.end()) continue;
    names.insert(a->second->description);
    auto& slot = best[v.event_id][a->second->description];
    if (!slot || v.id > slot->id) slot = &v;
  }
  std::unordered_map<std::string, std::map<std::string, std::string>> out;
  for (const auto& [event, values] : best) {
    for (const auto& [name, v] : values) out[event][name] = v->attribute_value;
  }
  return out;
}

}  // namespace

ExportSummary export_docel(const Batch& data, const fs::path& out_dir) {
  ExportSummary summary;
  summary.format = "docel";
  summary.out = out_dir;
  ensure_dir(out_dir);

  std::unordered_map<std::string, const EventType*> event_type;
  for (const auto& t : data.event_types) event_type.emplace(t.id, &t);
  std::unordered_map<std::string, const Event*> event_by_id;
  for (const auto& e : data.events) event_by_id.emplace(e.id, &e);

  auto write = [&](const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    csv::Writer w(out_dir / name);
    w.row(header);
    for (const auto& r : rows) w.row(r);
    w.close();
    summary.files.push_back(name);
    summary.rows[name] = rows.size();
  };

  {
    std::set<std::string> names;
    auto values = event_attribute_columns(data, names);
    std::vector<std::string> header{"event_id", "activity", "timestamp"};
    header.insert(header.end(), names.begin(), names.end());
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : data.events) {
      auto t = event_type.find(e.event_type_id);
      std::vector<std::string> row{e.id, t == event_type.end() ? e.event_type_id : t->second->description,
                                   canonical_time(e.timestamp, "event " + e.id)};
      const auto& own = values[e.id];
      for (const auto& n : names) {
        auto it = own.find(n);
        row.push_back(it == own.end() ? "" : it->second);
      }
      rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    write("events.csv", header, rows);
  }

  // Static attributes carry at most one value per object and are never
  // linked to an event; everything else is dynamic.
  std::map<std::string, std::vector<const ObjectAttributeValue*>> values_of_attribute;
  for (const auto& v : data.object_attribute_values) values_of_attribute[v.object_attribute_id].push_back(&v);
  std::unordered_map<std::string, std::vector<const EventToObjectAttributeValue*>> links_of_value;
  for (const auto& l : data.event_to_object_attribute_value) links_of_value[l.object_attribute_value_id].push_back(&l);

  auto is_static = [&](const ObjectAttribute& a) {
    std::set<std::string> seen;
    for (const auto* v : values_of_attribute[a.id]) {
      if (!seen.insert(v->object_id).second || links_of_value.count(v->id)) return false;
    }
    return true;
  };

  std::vector<const ObjectType*> types;
  for (const auto& t : data.object_types) types.push_back(&t);
  std::sort(types.begin(), types.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::map<std::string, std::vector<const ObjectAttribute*>> attrs_of_type;
  for (const auto& a : data.object_attributes) attrs_of_type[a.object_type_id].push_back(&a);

  std::set<std::string> used_names;
  auto file_name = [&](const std::string& base) {
    std::string name = base;
    for (int n = 2; used_names.count(name); ++n) name = base + "_" + std::to_string(n);
    used_names.insert(name);
    return name + ".csv";
  };

  for (const ObjectType* type : types) {
    auto& attrs = attrs_of_type[type->id];
    std::sort(attrs.begin(), attrs.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::vector<const ObjectAttribute*> statics;
    std::vector<const ObjectAttribute*> dynamics;
    for (const auto* a : attrs) (is_static(*a) ? statics : dynamics).push_back(a);

    std::vector<std::string> header{"object_id"};
    for (const auto* a : statics) header.push_back(a->description);
    std::map<std::string, std::vector<std::string>> by_object;
    for (const auto& o : data.objects) {
      if (o.object_type_id == type->id) by_object[o.id] = std::vector<std::string>(statics.size());
    }
    for (std::size_t i = 0; i < statics.size(); ++i) {
      for (const auto* v : values_of_attribute[statics[i]->id]) {
        auto it = by_object.find(v->object_id);
        if (it == by_object.end()) continue;
        it->second[i] = v->attribute_value;
      }
    }
    std::vector<std::vector<std::string>> rows;
    for (auto& [id, cells] : by_object) {
      std::vector<std::string> row{id};
      row.insert(row.end(), cells.begin(), cells.end());
      rows.push_back(std::move(row));
    }
    write(file_name("objects_" + sanitize_name(type->description)), header, rows);

    for (const auto* a : dynamics) {
      std::vector<std::vector<std::string>> dyn;
      for (const auto* v : values_of_attribute[a->id]) {
        std::string ts = canonical_time(v->timestamp, "object attribute value " + v->id);
        auto links = links_of_value.find(v->id);
        if (links == links_of_value.end()) {
          dyn.push_back({v->id, v->object_id, "", ts, v->attribute_value});
          continue;
        }
        for (const auto* l : links->second) dyn.push_back({v->id, v->object_id, l->event_id, ts, v->attribute_value});
      }
      std::sort(dyn.begin(), dyn.end());
      write(file_name("dynamic_" + sanitize_name(type->description) + "_" + sanitize_name(a->description)),
            {"value_id", "object_id", "event_id", "timestamp", "value"}, dyn);
    }
  }

  std::size_t orphans = 0;
  for (const auto& [attr, values] : values_of_attribute) {
    bool known = std::any_of(data.object_attributes.begin(), data.object_attributes.end(),
                             [&](const ObjectAttribute& a) { return a.id == attr; });
    if (!known) orphans += values.size();
  }
  if (orphans) summary.notes.push_back(std::to_string(orphans) + " attribute values of undefined attributes skipped");
  return summary;
}

ExportSummary export_docel(const HubStore& store, const fs::path& out_dir) {
  return export_docel(store.snapshot(), out_dir);
}

ExportSummary export_flat_csv(const Batch& data, const std::string& case_object_type, const fs::path& out) {
  const ObjectType* type = nullptr;
  for (const auto& t : data.object_types) {
    if (t.id == case_object_type) type = &t;
  }
  if (!type) {
    for (const auto& t : data.object_types) {
      if (t.description == case_object_type) {
        if (type) throw FormatError("ambiguous object type description '" + case_object_type + "'");
        type = &t;
      }
    }
  }
  if (!type) throw NotFoundError("unknown object type: " + case_object_type);

  ExportSummary summary;
  summary.format = "flat";
  summary.out = out;
  summary.files.push_back(out.string());

  std::unordered_map<std::string, const ObjectRecord*> object;
  for (const auto& o : data.objects) object.emplace(o.id, &o);
  std::unordered_map<std::string, const Event*> event;
  for (const auto& e : data.events) event.emplace(e.id, &e);
  std::unordered_map<std::string, const EventType*> event_type;
  for (const auto& t : data.event_types) event_type.emplace(t.id, &t);

  std::set<std::pair<std::string, std::string>> pairs;  // (case id, event id)
  for (const auto& r : data.event_to_object) {
    auto o = object.find(r.object_id);
    if (o == object.end() || o->second->object_type_id != type->id || !event.count(r.event_id)) continue;
    pairs.emplace(r.object_id, r.event_id);
  }

  std::set<std::string> names;
  auto values = event_attribute_columns(data, names);
  std::set<std::string> used;
  std::set<std::string> events_used;
  for (const auto& [c, e] : pairs) {
    events_used.insert(e);
    for (const auto& [n, v] : values[e]) used.insert(n);
  }

  struct Row {
    std::string case_id;
    EpochMillis time;
    std::string event_type_id;
    std::string event_id;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  for (const auto& [c, e] : pairs) {
    const Event* ev = event.at(e);
    auto t = parse_timestamp(ev->timestamp);
    if (!t) throw FormatError("cannot export event " + ev->id + ": invalid timestamp '" + ev->timestamp + "'");
    auto et = event_type.find(ev->event_type_id);
    std::vector<std::string> cells{c, et == event_type.end() ? ev->event_type_id : et->second->description,
                                   format_timestamp(*t), ev->id};
    const auto& own = values[e];
    for (const auto& n : used) {
      auto it = own.find(n);
      cells.push_back(it == own.end() ? "" : it->second);
    }
    rows.push_back({c, *t, ev->event_type_id, ev->id, std::move(cells)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.case_id, a.time, a.event_type_id, a.event_id) <
           std::tie(b.case_id, b.time, b.event_type_id, b.event_id);
  });

  if (out.has_parent_path()) ensure_dir(out.parent_path());
  csv::Writer w(out);
  std::vector<std::string> header{"case_id", "activity", "timestamp", "event_id"};
  header.insert(header.end(), used.begin(), used.end());
  w.row(header);
  for (const auto& r : rows) w.row(r.cells);
  w.close();

  summary.rows[out.filename().string()] = rows.size();
  summary.duplication_factor =
      events_used.empty() ? 1.0 : static_cast<double>(rows.size()) / static_cast<double>(events_used.size());
  std::size_t unrelated = data.events.size() - events_used.size();
  if (unrelated) {
    summary.notes.push_back(std::to_string(unrelated) + " events not related to any '" + type->description +
                            "' object omitted");
  }
  if (summary.duplication_factor > 1.0) {
    summary.notes.push_back("events related to several cases are repeated once per case");
  }
  return summary;
}

ExportSummary export_flat_csv(const HubStore& store, const std::string& case_object_type, const fs::path& out) {
  return export_flat_csv(store.snapshot(), case_object_type, out);
}

}  // namespace ochub::exporters
