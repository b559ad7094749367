#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ochub/schema.hpp"

namespace ochub::importers {

/// Where an emitted row came from.
struct RowOrigin {
  Table table;
  std::string id;
  std::string file;
  /// 1-based line in `file` (CSV: physical line of the record; SQLite: rowid).
  std::size_t line = 0;
};

/// A source row that produced no hub row, and why.
struct SkippedRow {
  std::string file;
  std::size_t line = 0;
  std::string reason;
};

/// A batch tagged with where it came from.
struct ImportResult {
  Batch batch;
  SourceProvenance provenance;
  std::vector<RowOrigin> origins;
  std::vector<SkippedRow> skipped;
};

/// Reads an OCEL 2.0 SQLite log. Types, attributes and qualifiers get
/// namespaced ids (`et:`, `ea:`, `ot:`, `oa:`, `q:`); event and object ids
/// are kept verbatim. Object attribute rows at the epoch with no changed
/// field are initial values; rows naming `ocel_changed_field` yield one
/// value for that field. Text 'null' cells count as absent. object_object
/// rows become static relations at the epoch.
ImportResult import_ocel2(const std::filesystem::path& file);

/// Reads a hub-CSV directory (one CSV per table, exact headers).
ImportResult import_hub_csv(const std::filesystem::path& dir);

/// Writes a batch as a hub-CSV directory; only non-empty tables are written
/// unless `all_tables` is set.
void write_hub_csv(const Batch& batch, const std::filesystem::path& dir, bool all_tables = false);

/// Declarative source-to-target mapping over CSV sources.
struct MappingConfig {
  struct Attribute {
    std::string name;
    std::string column;
    std::string datatype = "string";
    /// Object attributes only: where the value's timestamp comes from; the
    /// epoch sentinel when empty.
    std::string timestamp_column;
  };
  struct EventTypeSpec {
    std::string name;
    std::string source;
    std::string id_column;
    std::string timestamp_column;
    std::string description_column;
    std::vector<Attribute> attributes;
  };
  struct AttributeUpdates {
    std::string source;
    std::string id_column;
    std::string attribute;
    std::string value_column;
    std::string timestamp_column;
  };
  struct ObjectTypeSpec {
    std::string name;
    std::string source;
    std::string id_column;
    std::string description_column;
    std::vector<Attribute> attributes;
    std::vector<AttributeUpdates> updates;
    /// Datatypes of attributes that only appear in `updates`.
    std::map<std::string, std::string> update_datatypes;
  };
  struct EventToObjectSpec {
    std::string source;
    std::string event_type;
    std::string event_column;
    std::string object_type;
    std::string object_column;
    std::string qualifier;
    std::string value_column;
  };
  struct ObjectToObjectSpec {
    std::string source;
    std::string source_type;
    std::string source_column;
    std::string target_type;
    std::string target_column;
    std::string qualifier;
    std::string timestamp_column;
    /// Empty cells in this column mean "relation terminated" (NULL).
    std::string value_column;
  };
  struct EventToValueSpec {
    std::string source;
    std::string event_type;
    std::string event_column;
    std::string object_type;
    std::string object_column;
    std::string attribute;
    std::string timestamp_column;
    std::string qualifier;
  };

  std::string name;
  std::vector<EventTypeSpec> event_types;
  std::vector<ObjectTypeSpec> object_types;
  std::vector<EventToObjectSpec> event_to_object;
  std::vector<ObjectToObjectSpec> object_to_object;
  std::vector<EventToValueSpec> event_to_object_attribute_value;

  /// Parses the JSON config document; FormatError on missing keys.
  static MappingConfig parse(const std::string& json_text);
  static MappingConfig load(const std::filesystem::path& file);
};

/// Applies a mapping to the CSV files in `sources`. Every source row yields
/// at least one hub row or an entry in `skipped`.
ImportResult import_mapped_csv(const MappingConfig& config, const std::filesystem::path& sources);

/// Deterministic ids shared by importers and exporters.
namespace ids {
std::string event_type(std::string_view name);
std::string event_attribute(std::string_view type, std::string_view name);
std::string object_type(std::string_view name);
std::string object_attribute(std::string_view type, std::string_view name);
std::string qualifier(std::string_view name);
std::string object_value(std::string_view object_id, std::string_view attribute, std::string_view timestamp);
std::string event_value(std::string_view event_id, std::string_view attribute);
}  // namespace ids

/// OCEL 2.0 leaves 'null' text in typed columns; treat it as absent.
bool is_null_literal(const std::optional<std::string>& cell);

}  // namespace ochub::importers
