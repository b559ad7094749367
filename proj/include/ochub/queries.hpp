#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ochub/schema.hpp"
#include "ochub/store.hpp"
#include "ochub/timestamp.hpp"

namespace ochub {

/// One position in an object's history: either an event the object takes
/// part in, or a standalone attribute update (no event at that instant).
struct TimelineEntry {
  EpochMillis time = 0;
  std::string timestamp;
  std::optional<std::string> event_id;
  std::string event_type_id;
  /// object_attribute_values rows of the object carrying this timestamp.
  std::vector<std::string> attribute_value_ids;
  /// Distinct object_attribute ids among those rows, sorted.
  std::vector<std::string> updated_attributes;

  bool is_event() const { return event_id.has_value(); }
  bool operator==(const TimelineEntry&) const = default;
};

/// Read-side index over a store snapshot. Cheap lookups by id, object
/// timelines, and temporal object-to-object queries.
class HubIndex {
 public:
  explicit HubIndex(Batch snapshot);
  HubIndex(const HubIndex&) = delete;
  HubIndex& operator=(const HubIndex&) = delete;
  HubIndex(HubIndex&&) = default;
  HubIndex& operator=(HubIndex&&) = default;

  const Batch& data() const { return data_; }

  const Event* event(std::string_view id) const;
  const ObjectRecord* object(std::string_view id) const;
  const ObjectType* object_type(std::string_view id) const;
  const EventType* event_type(std::string_view id) const;
  const RelationQualifier* qualifier(std::string_view id) const;
  const ObjectAttribute* object_attribute(std::string_view id) const;
  const EventAttribute* event_attribute(std::string_view id) const;

  /// Entries ordered by (timestamp, event_type_id, event_id). Attribute
  /// updates sharing a timestamp with events of the object are merged into
  /// the last of those events. Throws NotFoundError for an unknown object
  /// and FormatError when a timestamp on the path cannot be parsed.
  std::vector<TimelineEntry> timeline(std::string_view object_id) const;

  /// Qualifier value of the (source, target, qualifier) relation in force at
  /// `at`: the row with the greatest timestamp <= at (ties: greatest id).
  /// Absent when no such row exists or it carries NULL (terminated).
  std::optional<std::string> o2o_valid_at(std::string_view source_object_id, std::string_view target_object_id,
                                          std::string_view qualifier_id, EpochMillis at) const;

  /// Event ids related to an object through event_to_object (deduplicated).
  const std::vector<std::string>& events_of(std::string_view object_id) const;
  /// object_to_object rows where the object is the source.
  const std::vector<const ObjectToObject*>& relations_from(std::string_view object_id) const;

 private:
  template <typename Row>
  using ById = std::unordered_map<std::string_view, const Row*>;

  Batch data_;
  ById<Event> events_;
  ById<ObjectRecord> objects_;
  ById<ObjectType> object_types_;
  ById<EventType> event_types_;
  ById<RelationQualifier> qualifiers_;
  ById<ObjectAttribute> object_attributes_;
  ById<EventAttribute> event_attributes_;
  std::unordered_map<std::string_view, std::vector<std::string>> events_of_object_;
  std::unordered_map<std::string_view, std::vector<const ObjectAttributeValue*>> values_of_object_;
  std::unordered_map<std::string_view, std::vector<const ObjectToObject*>> o2o_from_;
};

std::vector<TimelineEntry> object_timeline(const HubStore& store, const std::string& object_id);

/// `at` is any timestamp text accepted by parse_timestamp.
std::optional<std::string> o2o_valid_at(const HubStore& store, const std::string& source_object_id,
                                        const std::string& target_object_id, const std::string& qualifier_id,
                                        std::string_view at);

/// Row counts of the hub broken down by type, qualifier, and attribute.
struct StatsReport {
  std::size_t events = 0;
  std::size_t objects = 0;
  std::size_t event_to_object = 0;
  std::size_t object_to_object = 0;
  std::size_t event_to_object_attribute_value = 0;

  std::map<std::string, std::size_t> table_rows;
  std::map<std::string, std::size_t> events_per_type;
  std::map<std::string, std::size_t> objects_per_type;
  std::map<std::string, std::size_t> event_to_object_per_qualifier;
  std::map<std::string, std::size_t> object_to_object_per_qualifier;
  std::map<std::string, std::size_t> event_to_object_attribute_value_per_qualifier;
  /// (event type id, object type id) -> event_to_object rows.
  std::map<std::pair<std::string, std::string>, std::size_t> event_to_object_per_type_pair;
  std::map<std::string, std::size_t> values_per_event_attribute;
  std::map<std::string, std::size_t> values_per_object_attribute;

  std::string to_json() const;
  std::string to_text() const;
};

StatsReport summary_stats(const Batch& snapshot);
StatsReport summary_stats(const HubStore& store);

}  // namespace ochub
