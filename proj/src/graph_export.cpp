#include "ochub/graph_export.hpp"

#include <algorithm>
#include <tuple>

#include "ochub/csv.hpp"
#include "ochub/errors.hpp"

namespace ochub {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_header(std::string_view header) {
  std::vector<std::string> out(1);
  for (char c : header) {
    if (c == ',') {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  return out;
}

csv::Table read_checked(const fs::path& file, std::string_view header) {
  if (!fs::exists(file)) throw NotFoundError("missing graph file " + file.string());
  auto table = csv::read(file);
  if (table.header != split_header(header)) {
    throw FormatError(file.string() + ": header must be '" + std::string(header) + "'");
  }
  return table;
}

}  // namespace

void GraphExport::sort() {
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const GraphNodeRow& a, const GraphNodeRow& b) { return a.id < b.id; });
  std::stable_sort(edges.begin(), edges.end(), [](const GraphEdgeRow& a, const GraphEdgeRow& b) {
    return std::tie(a.start, a.end, a.type, a.object, a.qualifier) <
           std::tie(b.start, b.end, b.type, b.object, b.qualifier);
  });
}

void GraphExport::write(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  csv::Writer nodes_out(dir / "nodes.csv");
  nodes_out.row(split_header(kNodesHeader));
  for (const auto& n : nodes) nodes_out.row({n.id, n.kind, n.label, n.timestamp, n.detail});
  nodes_out.close();

  csv::Writer edges_out(dir / "edges.csv");
  edges_out.row(split_header(kEdgesHeader));
  for (const auto& e : edges) edges_out.row({e.start, e.end, e.type, e.object, e.qualifier, e.frequency});
  edges_out.close();
}

GraphExport GraphExport::read(const fs::path& dir) {
  GraphExport g;
  for (const auto& r : read_checked(dir / "nodes.csv", kNodesHeader).rows) {
    g.nodes.push_back({r[0], r[1], r[2], r[3], r[4]});
  }
  for (const auto& r : read_checked(dir / "edges.csv", kEdgesHeader).rows) {
    g.edges.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
  }
  return g;
}

}  // namespace ochub
