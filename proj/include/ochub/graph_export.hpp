#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ochub {

/// One row of nodes.csv (`id:ID,kind,:LABEL,timestamp,detail`).
struct GraphNodeRow {
  std::string id;
  std::string kind;
  std::string label;
  std::string timestamp;
  std::string detail;
  bool operator==(const GraphNodeRow&) const = default;
};

/// One row of edges.csv (`:START_ID,:END_ID,:TYPE,object,qualifier,frequency`).
struct GraphEdgeRow {
  std::string start;
  std::string end;
  std::string type;
  std::string object;
  std::string qualifier;
  std::string frequency;
  bool operator==(const GraphEdgeRow&) const = default;
};

/// Bulk-import files for a property-graph database.
struct GraphExport {
  std::vector<GraphNodeRow> nodes;
  std::vector<GraphEdgeRow> edges;

  /// Sorts nodes by id and edges by (start, end, type, object, qualifier).
  void sort();

  /// Writes nodes.csv and edges.csv into `dir` (created if needed).
  void write(const std::filesystem::path& dir) const;
  /// Reads nodes.csv and edges.csv back; FormatError on header mismatch.
  static GraphExport read(const std::filesystem::path& dir);

  bool operator==(const GraphExport&) const = default;
};

inline constexpr const char* kNodesHeader = "id:ID,kind,:LABEL,timestamp,detail";
inline constexpr const char* kEdgesHeader = ":START_ID,:END_ID,:TYPE,object,qualifier,frequency";

}  // namespace ochub
