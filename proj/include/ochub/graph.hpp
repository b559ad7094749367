#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ochub/exporters.hpp"
#include "ochub/graph_export.hpp"
#include "ochub/quality.hpp"
#include "ochub/queries.hpp"

namespace ochub::graph {

struct EventNode {
  std::string id;
  std::string event_id;
  std::string event_type_id;
  std::string timestamp;
  bool operator==(const EventNode&) const = default;
};

/// An object at one position of its timeline. Concurrent events on the same
/// object yield one snapshot each; `ordinal` numbers them within the instant.
struct SnapshotNode {
  std::string id;
  std::string object_id;
  std::string object_type_id;
  std::string timestamp;
  EpochMillis time = 0;
  std::size_t ordinal = 0;
  std::vector<std::string> updated_attributes;
  /// Event type of the event that produced this snapshot, else of the
  /// object's last earlier event; nullopt before any event (START).
  std::optional<std::string> previous_event_type_id;
  bool operator==(const SnapshotNode&) const = default;
};

enum class EdgeKind { kEventToSnapshot, kSnapshotToEvent, kSnapshotToSnapshot, kObjectToObject };

std::string_view to_string(EdgeKind kind);

struct GraphEdge {
  EdgeKind kind;
  std::string start;
  std::string end;
  /// Object whose chain the edge belongs to (DF kinds).
  std::string object_id;
  /// Relation value in force (O2O only).
  std::string qualifier;
  auto operator<=>(const GraphEdge&) const = default;
};

struct SnapshotGraph {
  std::vector<EventNode> events;
  std::vector<SnapshotNode> snapshots;
  std::vector<GraphEdge> edges;

  /// Nodes by id, edges by (start, end, kind, object, qualifier).
  void sort();
  GraphExport to_export() const;
};

inline constexpr const char* kStart = "START";

struct OverviewGraph {
  struct Node {
    std::string kind;
    std::string label;
    std::string detail;
    bool operator==(const Node&) const = default;
  };
  /// (start, end, :TYPE, qualifier) -> frequency.
  using EdgeKey = std::tuple<std::string, std::string, std::string, std::string>;

  std::map<std::string, Node> nodes;
  std::map<EdgeKey, std::size_t> edges;

  std::size_t total_frequency() const;
  GraphExport to_export() const;
  bool operator==(const OverviewGraph&) const = default;
};

std::string event_node_id(std::string_view event_id);
std::string snapshot_node_id(std::string_view object_id, std::string_view timestamp, std::size_t ordinal);
std::string event_type_node_id(std::string_view event_type_id);
/// Group key rendered as an id: object type, previous event type (or
/// START), and the sorted updated-attribute set.
std::string group_node_id(const SnapshotNode& snapshot);

/// Case-level graph for `object_ids`, or for every object when empty.
/// Throws NotFoundError for an unknown id.
SnapshotGraph build_case_graph(const HubIndex& index, const std::vector<std::string>& object_ids = {});
SnapshotGraph build_case_graph(const HubStore& store, const std::vector<std::string>& object_ids = {});

OverviewGraph build_overview_graph(const SnapshotGraph& case_graph);

/// Runs the graph checkpoint into `report`; writes nodes.csv and edges.csv
/// only when it passes.
exporters::ExportSummary export_graph_csv(const GraphExport& graph, const std::filesystem::path& out_dir,
                                          quality::QualityReport& report);

}  // namespace ochub::graph
