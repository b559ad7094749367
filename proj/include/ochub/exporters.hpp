#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ochub/schema.hpp"
#include "ochub/store.hpp"

namespace ochub::exporters {

struct ExportSummary {
  std::string format;
  std::filesystem::path out;
  std::vector<std::string> files;
  /// Rows written per file or table.
  std::map<std::string, std::size_t> rows;
  /// Documented information losses and other remarks.
  std::vector<std::string> notes;
  /// Flat export only: output rows per distinct exported event.
  double duplication_factor = 1.0;

  std::string to_text() const;
};

/// Lower-case, every non-alphanumeric becomes '_'.
std::string sanitize_name(std::string_view name);

/// Writes an OCEL 2.0 SQLite file (replacing `out`). Event attribute
/// values are pivoted into one event_<type> table per event type; object
/// attribute history becomes object_<type> rows (initial values at the
/// epoch share one row, later values carry ocel_changed_field).
/// Event-to-attribute-value links are dropped and object-to-object
/// relations are flattened to static rows labelled with the qualifier
/// description.
ExportSummary export_ocel2(const Batch& snapshot, const std::filesystem::path& out);
ExportSummary export_ocel2(const HubStore& store, const std::filesystem::path& out);

/// DOCEL as CSV files (layout "docel-csv-v1"): events.csv,
/// objects_<type>.csv with static attributes, and one
/// dynamic_<type>_<attribute>.csv per remaining object attribute.
ExportSummary export_docel(const Batch& snapshot, const std::filesystem::path& out_dir);
ExportSummary export_docel(const HubStore& store, const std::filesystem::path& out_dir);

/// Classical single-case-notion log: one row per (event, related object of
/// `case_object_type`), sorted by (case id, timestamp, event_type_id,
/// event_id). `case_object_type` is matched against object type ids first,
/// then descriptions.
ExportSummary export_flat_csv(const Batch& snapshot, const std::string& case_object_type,
                              const std::filesystem::path& out);
ExportSummary export_flat_csv(const HubStore& store, const std::string& case_object_type,
                              const std::filesystem::path& out);

}  // namespace ochub::exporters
