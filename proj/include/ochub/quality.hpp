#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ochub/graph_export.hpp"
#include "ochub/schema.hpp"
#include "ochub/store.hpp"

namespace ochub::quality {

enum class CheckKind {
  kUniquePrimaryKeys,
  kForeignKeysNotNull,
  kReferentialIntegrity,
  kTimestampValidity,
  kGraphNodeUniqueness,
  kGraphEdgeEndpoints,
};

inline constexpr CheckKind kAllChecks[] = {
    CheckKind::kUniquePrimaryKeys,    CheckKind::kForeignKeysNotNull,  CheckKind::kReferentialIntegrity,
    CheckKind::kTimestampValidity,    CheckKind::kGraphNodeUniqueness, CheckKind::kGraphEdgeEndpoints,
};

enum class Checkpoint { kStaging, kTransform, kGraph };

std::string_view to_string(CheckKind kind);
std::string_view to_string(Checkpoint checkpoint);
std::optional<Checkpoint> parse_checkpoint(std::string_view text);

struct Violation {
  CheckKind check;
  /// Table name, or nodes.csv / edges.csv for graph checks.
  std::string table;
  /// Offending row id (or node id / "start->end" for edges).
  std::string key;
  std::string column;
  /// The offending cell, e.g. the id that failed to resolve.
  std::string value;
  /// Set for referential-integrity misses: the table the value should exist in.
  std::optional<Table> referenced_table;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

struct CheckStatus {
  CheckKind check;
  std::size_t violations = 0;
  bool passed() const { return violations == 0; }
};

struct QualityReport {
  Checkpoint checkpoint = Checkpoint::kStaging;
  std::vector<CheckStatus> checks;
  std::vector<Violation> violations;
  std::size_t rows_scanned = 0;

  bool passed() const { return violations.empty(); }
  std::size_t count(CheckKind kind) const;

  /// One line per check plus the first `max_violations` violations.
  std::string summary(std::size_t max_violations = 20) const;
  /// CSV with columns checkpoint,check,table,key,detail.
  void write_csv(const std::filesystem::path& file) const;
};

// Individual checks. `context` (when given) is the data already in the
// store: keys are resolved against batch ∪ context, and a batch row that
// reuses a context id with different content counts as a duplicate key.

std::vector<Violation> check_unique_primary_keys(const Batch& rows, const Batch* context = nullptr);
std::vector<Violation> check_foreign_keys_not_null(const Batch& rows);
std::vector<Violation> check_referential_integrity(const Batch& rows, const Batch* context = nullptr);
std::vector<Violation> check_timestamp_validity(const Batch& rows);
std::vector<Violation> check_graph_node_uniqueness(const GraphExport& graph);
std::vector<Violation> check_graph_edge_endpoints(const GraphExport& graph);

/// Staging: an incoming batch, checked against the store it will join.
QualityReport run_staging(const Batch& batch, const Batch& store_snapshot);
QualityReport run_staging(const Batch& batch, const HubStore& store);
/// Transform: checks 1-4 across the whole store.
QualityReport run_transform(const Batch& store_snapshot);
QualityReport run_transform(const HubStore& store);
/// Graph: node-id uniqueness and edge endpoints of bulk-import files.
QualityReport run_graph(const GraphExport& graph);

/// Placeholder objects (type `ot:unknown`, description = the id) for every
/// object id that `violations` report as missing. Throws UnsupportedError
/// for any violation that is not a missing-object reference.
Batch synthesize_missing_objects(const Batch& store_snapshot, const std::vector<Violation>& violations);
Batch synthesize_missing_objects(const HubStore& store, const std::vector<Violation>& violations);

inline constexpr std::string_view kUnknownObjectType = "ot:unknown";

}  // namespace ochub::quality
