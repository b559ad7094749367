#include "ochub/queries.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "ochub/errors.hpp"

namespace ochub {

namespace {

template <typename Row, typename Map>
void index_rows(const std::vector<Row>& rows, Map& map) {
  map.reserve(rows.size());
  for (const auto& r : rows) map.emplace(r.id, &r);
}

template <typename Map>
auto lookup(const Map& map, std::string_view id) -> decltype(map.begin()->second) {
  auto it = map.find(id);
  return it == map.end() ? nullptr : it->second;
}

EpochMillis require_time(const std::string& text, std::string_view what) {
  auto t = parse_timestamp(text);
  if (!t) throw FormatError("invalid timestamp '" + text + "' on " + std::string(what));
  return *t;
}

}  // namespace

HubIndex::HubIndex(Batch snapshot) : data_(std::move(snapshot)) {
  index_rows(data_.events, events_);
  index_rows(data_.objects, objects_);
  index_rows(data_.object_types, object_types_);
  index_rows(data_.event_types, event_types_);
  index_rows(data_.relation_qualifiers, qualifiers_);
  index_rows(data_.object_attributes, object_attributes_);
  index_rows(data_.event_attributes, event_attributes_);
  for (const auto& r : data_.event_to_object) events_of_object_[r.object_id].push_back(r.event_id);
  for (auto& [_, ids] : events_of_object_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  for (const auto& r : data_.object_attribute_values) values_of_object_[r.object_id].push_back(&r);
  for (const auto& r : data_.object_to_object) o2o_from_[r.source_object_id].push_back(&r);
}

const Event* HubIndex::event(std::string_view id) const { return lookup(events_, id); }
const ObjectRecord* HubIndex::object(std::string_view id) const { return lookup(objects_, id); }
const ObjectType* HubIndex::object_type(std::string_view id) const { return lookup(object_types_, id); }
const EventType* HubIndex::event_type(std::string_view id) const { return lookup(event_types_, id); }
const RelationQualifier* HubIndex::qualifier(std::string_view id) const { return lookup(qualifiers_, id); }
const ObjectAttribute* HubIndex::object_attribute(std::string_view id) const {
  return lookup(object_attributes_, id);
}
const EventAttribute* HubIndex::event_attribute(std::string_view id) const {
  return lookup(event_attributes_, id);
}

const std::vector<std::string>& HubIndex::events_of(std::string_view object_id) const {
  static const std::vector<std::string> none;
  auto it = events_of_object_.find(object_id);
  return it == events_of_object_.end() ? none : it->second;
}

const std::vector<const ObjectToObject*>& HubIndex::relations_from(std::string_view object_id) const {
  static const std::vector<const ObjectToObject*> none;
  auto it = o2o_from_.find(object_id);
  return it == o2o_from_.end() ? none : it->second;
}

std::vector<TimelineEntry> HubIndex::timeline(std::string_view object_id) const {
  if (!object(object_id)) throw NotFoundError("unknown object id '" + std::string(object_id) + "'");

  std::vector<TimelineEntry> entries;
  for (const auto& event_id : events_of(object_id)) {
    const Event* e = event(event_id);
    // Dangling links are a quality-check concern; the timeline skips them.
    if (!e) continue;
    TimelineEntry entry;
    entry.time = require_time(e->timestamp, "event " + e->id);
    entry.timestamp = format_timestamp(entry.time);
    entry.event_id = e->id;
    entry.event_type_id = e->event_type_id;
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(), [](const TimelineEntry& a, const TimelineEntry& b) {
    return std::tie(a.time, a.event_type_id, *a.event_id) < std::tie(b.time, b.event_type_id, *b.event_id);
  });

  std::map<EpochMillis, TimelineEntry> updates;
  if (auto it = values_of_object_.find(object_id); it != values_of_object_.end()) {
    for (const ObjectAttributeValue* v : it->second) {
      EpochMillis t = require_time(v->timestamp, "object attribute value " + v->id);
      // Merge into the last event at t, if the object has one there.
      auto after_t = std::upper_bound(entries.begin(), entries.end(), t,
                                      [](EpochMillis value, const TimelineEntry& e) { return value < e.time; });
      TimelineEntry* target = nullptr;
      if (after_t != entries.begin() && std::prev(after_t)->time == t) {
        target = &*std::prev(after_t);
      } else {
        auto [u, inserted] = updates.try_emplace(t);
        if (inserted) {
          u->second.time = t;
          u->second.timestamp = format_timestamp(t);
        }
        target = &u->second;
      }
      target->attribute_value_ids.push_back(v->id);
      target->updated_attributes.push_back(v->object_attribute_id);
    }
  }
  for (auto& [_, entry] : updates) entries.push_back(std::move(entry));
  // Stable: events keep their (type, id) order; updates never share a time with events.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const TimelineEntry& a, const TimelineEntry& b) { return a.time < b.time; });
  for (auto& e : entries) {
    std::sort(e.attribute_value_ids.begin(), e.attribute_value_ids.end());
    std::sort(e.updated_attributes.begin(), e.updated_attributes.end());
    e.updated_attributes.erase(std::unique(e.updated_attributes.begin(), e.updated_attributes.end()),
                               e.updated_attributes.end());
  }
  return entries;
}

std::optional<std::string> HubIndex::o2o_valid_at(std::string_view source_object_id,
                                                  std::string_view target_object_id,
                                                  std::string_view qualifier_id, EpochMillis at) const {
  if (!object(source_object_id)) throw NotFoundError("unknown object id '" + std::string(source_object_id) + "'");
  if (!object(target_object_id)) throw NotFoundError("unknown object id '" + std::string(target_object_id) + "'");
  if (!qualifier(qualifier_id)) throw NotFoundError("unknown qualifier id '" + std::string(qualifier_id) + "'");

  const ObjectToObject* best = nullptr;
  EpochMillis best_time = 0;
  for (const ObjectToObject* r : relations_from(source_object_id)) {
    if (r->target_object_id != target_object_id || r->qualifier_id != qualifier_id) continue;
    EpochMillis t = require_time(r->timestamp, "object_to_object " + r->id);
    if (t > at) continue;
    if (!best || t > best_time || (t == best_time && r->id > best->id)) {
      best = r;
      best_time = t;
    }
  }
  if (!best) return std::nullopt;
  return best->qualifier_value;
}

std::vector<TimelineEntry> object_timeline(const HubStore& store, const std::string& object_id) {
  if (!store.find(Table::kObjects, object_id)) throw NotFoundError("unknown object id '" + object_id + "'");
  return HubIndex(store.snapshot()).timeline(object_id);
}

std::optional<std::string> o2o_valid_at(const HubStore& store, const std::string& source_object_id,
                                        const std::string& target_object_id, const std::string& qualifier_id,
                                        std::string_view at) {
  auto when = parse_timestamp(at);
  if (!when) throw FormatError("invalid timestamp '" + std::string(at) + "'");
  return HubIndex(store.snapshot()).o2o_valid_at(source_object_id, target_object_id, qualifier_id, *when);
}

StatsReport summary_stats(const Batch& data) {
  StatsReport r;
  for (const auto& t : schema()) r.table_rows[std::string(t.name)] = data.size(t.table);
  r.events = data.events.size();
  r.objects = data.objects.size();
  r.event_to_object = data.event_to_object.size();
  r.object_to_object = data.object_to_object.size();
  r.event_to_object_attribute_value = data.event_to_object_attribute_value.size();

  for (const auto& t : data.event_types) r.events_per_type[t.id];
  for (const auto& t : data.object_types) r.objects_per_type[t.id];
  for (const auto& a : data.event_attributes) r.values_per_event_attribute[a.id];
  for (const auto& a : data.object_attributes) r.values_per_object_attribute[a.id];

  std::unordered_map<std::string_view, std::string_view> event_type_of, object_type_of;
  for (const auto& e : data.events) {
    ++r.events_per_type[e.event_type_id];
    event_type_of[e.id] = e.event_type_id;
  }
  for (const auto& o : data.objects) {
    ++r.objects_per_type[o.object_type_id];
    object_type_of[o.id] = o.object_type_id;
  }
  auto type_or_missing = [](const auto& map, const std::string& id) {
    auto it = map.find(id);
    return it == map.end() ? std::string("<missing>") : std::string(it->second);
  };
  for (const auto& x : data.event_to_object) {
    ++r.event_to_object_per_qualifier[x.qualifier_id];
    ++r.event_to_object_per_type_pair[{type_or_missing(event_type_of, x.event_id),
                                       type_or_missing(object_type_of, x.object_id)}];
  }
  for (const auto& x : data.object_to_object) ++r.object_to_object_per_qualifier[x.qualifier_id];
  for (const auto& x : data.event_to_object_attribute_value) {
    ++r.event_to_object_attribute_value_per_qualifier[x.qualifier_id];
  }
  for (const auto& v : data.event_attribute_values) ++r.values_per_event_attribute[v.event_attribute_id];
  for (const auto& v : data.object_attribute_values) ++r.values_per_object_attribute[v.object_attribute_id];
  return r;
}

StatsReport summary_stats(const HubStore& store) { return summary_stats(store.snapshot()); }

std::string StatsReport::to_json() const {
  nlohmann::ordered_json j;
  j["events"] = events;
  j["objects"] = objects;
  j["event_to_object"] = event_to_object;
  j["object_to_object"] = object_to_object;
  j["event_to_object_attribute_value"] = event_to_object_attribute_value;
  j["table_rows"] = table_rows;
  j["events_per_type"] = events_per_type;
  j["objects_per_type"] = objects_per_type;
  j["event_to_object_per_qualifier"] = event_to_object_per_qualifier;
  j["object_to_object_per_qualifier"] = object_to_object_per_qualifier;
  j["event_to_object_attribute_value_per_qualifier"] = event_to_object_attribute_value_per_qualifier;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [key, n] : event_to_object_per_type_pair) {
    pairs.push_back({{"event_type_id", key.first}, {"object_type_id", key.second}, {"count", n}});
  }
  j["event_to_object_per_type_pair"] = pairs;
  j["values_per_event_attribute"] = values_per_event_attribute;
  j["values_per_object_attribute"] = values_per_object_attribute;
  return j.dump(2);
}

std::string StatsReport::to_text() const {
  std::ostringstream out;
  out << "events: " << events << "\nobjects: " << objects << "\nevent_to_object: " << event_to_object
      << "\nobject_to_object: " << object_to_object
      << "\nevent_to_object_attribute_value: " << event_to_object_attribute_value << '\n';
  auto section = [&](const char* title, const std::map<std::string, std::size_t>& m) {
    if (m.empty()) return;
    out << '\n' << title << ":\n";
    for (const auto& [k, v] : m) out << "  " << k << ": " << v << '\n';
  };
  section("events per type", events_per_type);
  section("objects per type", objects_per_type);
  section("event_to_object per qualifier", event_to_object_per_qualifier);
  section("object_to_object per qualifier", object_to_object_per_qualifier);
  section("event_to_object_attribute_value per qualifier", event_to_object_attribute_value_per_qualifier);
  if (!event_to_object_per_type_pair.empty()) {
    out << "\nevent_to_object per (event type, object type):\n";
    for (const auto& [k, v] : event_to_object_per_type_pair) out << "  " << k.first << " x " << k.second << ": " << v << '\n';
  }
  section("values per event attribute", values_per_event_attribute);
  section("values per object attribute", values_per_object_attribute);
  return out.str();
}

}  // namespace ochub
