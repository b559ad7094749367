#include "ochub/graph.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "ochub/errors.hpp"

namespace ochub::graph {

namespace fs = std::filesystem;

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kEventToSnapshot: return "DF_EVENT_TO_SNAPSHOT";
    case EdgeKind::kSnapshotToEvent: return "DF_SNAPSHOT_TO_EVENT";
    case EdgeKind::kSnapshotToSnapshot: return "DF_SNAPSHOT_TO_SNAPSHOT";
    case EdgeKind::kObjectToObject: return "O2O";
  }
  return "?";
}

namespace {

std::string edge_type(EdgeKind kind) { return kind == EdgeKind::kObjectToObject ? "O2O" : "DF"; }

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(sep);
    out += items[i];
  }
  return out;
}

}  // namespace

std::string event_node_id(std::string_view event_id) { return "event:" + std::string(event_id); }

std::string snapshot_node_id(std::string_view object_id, std::string_view timestamp, std::size_t ordinal) {
  std::string id = "snapshot:" + std::string(object_id) + "@" + std::string(timestamp);
  if (ordinal) id += "#" + std::to_string(ordinal);
  return id;
}

std::string event_type_node_id(std::string_view event_type_id) { return "type:" + std::string(event_type_id); }

std::string group_node_id(const SnapshotNode& s) {
  return "group:" + s.object_type_id + "|" + s.previous_event_type_id.value_or(kStart) + "|" +
         join(s.updated_attributes, ',');
}

void SnapshotGraph::sort() {
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(snapshots.begin(), snapshots.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.start, a.end, a.kind, a.object_id, a.qualifier) <
           std::tie(b.start, b.end, b.kind, b.object_id, b.qualifier);
  });
}

GraphExport SnapshotGraph::to_export() const {
  GraphExport out;
  for (const auto& e : events) out.nodes.push_back({e.id, "event", "Event", e.timestamp, e.event_type_id});
  for (const auto& s : snapshots) {
    out.nodes.push_back({s.id, "snapshot", "Snapshot", s.timestamp,
                         "object=" + s.object_id + ";type=" + s.object_type_id +
                             ";updated=" + join(s.updated_attributes, ',')});
  }
  for (const auto& e : edges) out.edges.push_back({e.start, e.end, edge_type(e.kind), e.object_id, e.qualifier, "1"});
  out.sort();
  return out;
}

std::size_t OverviewGraph::total_frequency() const {
  std::size_t n = 0;
  for (const auto& [_, f] : edges) n += f;
  return n;
}

GraphExport OverviewGraph::to_export() const {
  GraphExport out;
  for (const auto& [id, n] : nodes) out.nodes.push_back({id, n.kind, n.label, "", n.detail});
  for (const auto& [key, f] : edges) {
    const auto& [start, end, type, qualifier] = key;
    out.edges.push_back({start, end, type, "", qualifier, std::to_string(f)});
  }
  out.sort();
  return out;
}

SnapshotGraph build_case_graph(const HubIndex& index, const std::vector<std::string>& object_ids) {
  std::vector<std::string> selection = object_ids;
  if (selection.empty()) {
    for (const auto& o : index.data().objects) selection.push_back(o.id);
  }
  std::sort(selection.begin(), selection.end());
  selection.erase(std::unique(selection.begin(), selection.end()), selection.end());

  SnapshotGraph g;
  std::set<std::string> event_nodes;
  // Last snapshot of each object per instant, for O2O edges.
  std::unordered_map<std::string, std::map<EpochMillis, std::string>> last_snapshot;

  for (const auto& object_id : selection) {
    const ObjectRecord* object = index.object(object_id);
    if (!object) throw NotFoundError("unknown object id '" + object_id + "'");
    auto& at = last_snapshot[object_id];

    std::optional<std::string> previous_type;
    std::optional<std::string> previous_snapshot;
    EpochMillis previous_time = 0;
    std::size_t ordinal = 0;
    for (const auto& entry : index.timeline(object_id)) {
      ordinal = (previous_snapshot && entry.time == previous_time) ? ordinal + 1 : 0;
      SnapshotNode s;
      s.object_id = object_id;
      s.object_type_id = object->object_type_id;
      s.timestamp = entry.timestamp;
      s.time = entry.time;
      s.ordinal = ordinal;
      s.id = snapshot_node_id(object_id, entry.timestamp, ordinal);
      s.updated_attributes = entry.updated_attributes;

      if (entry.is_event()) {
        std::string event_id = event_node_id(*entry.event_id);
        if (event_nodes.insert(event_id).second) {
          g.events.push_back({event_id, *entry.event_id, entry.event_type_id, entry.timestamp});
        }
        if (previous_snapshot) g.edges.push_back({EdgeKind::kSnapshotToEvent, *previous_snapshot, event_id, object_id, ""});
        g.edges.push_back({EdgeKind::kEventToSnapshot, event_id, s.id, object_id, ""});
        previous_type = entry.event_type_id;
      } else if (previous_snapshot) {
        g.edges.push_back({EdgeKind::kSnapshotToSnapshot, *previous_snapshot, s.id, object_id, ""});
      }
      s.previous_event_type_id = previous_type;
      previous_snapshot = s.id;
      previous_time = entry.time;
      at[entry.time] = s.id;
      g.snapshots.push_back(std::move(s));
    }
  }

  std::set<GraphEdge> o2o;
  for (const auto& source : selection) {
    const auto& source_at = last_snapshot[source];
    std::set<std::pair<std::string, std::string>> relations;
    for (const ObjectToObject* r : index.relations_from(source)) relations.emplace(r->target_object_id, r->qualifier_id);
    for (const auto& [target, qualifier] : relations) {
      auto t = last_snapshot.find(target);
      if (t == last_snapshot.end() || !index.qualifier(qualifier) || !index.object(target)) continue;
      for (const auto& [time, snapshot] : source_at) {
        auto other = t->second.find(time);
        if (other == t->second.end()) continue;
        if (auto value = index.o2o_valid_at(source, target, qualifier, time)) {
          o2o.insert({EdgeKind::kObjectToObject, snapshot, other->second, "", *value});
        }
      }
    }
  }
  g.edges.insert(g.edges.end(), o2o.begin(), o2o.end());
  g.sort();
  return g;
}

SnapshotGraph build_case_graph(const HubStore& store, const std::vector<std::string>& object_ids) {
  return build_case_graph(HubIndex(store.snapshot()), object_ids);
}

OverviewGraph build_overview_graph(const SnapshotGraph& case_graph) {
  OverviewGraph out;
  std::unordered_map<std::string, std::string> mapped;
  for (const auto& e : case_graph.events) {
    std::string id = event_type_node_id(e.event_type_id);
    out.nodes.try_emplace(id, OverviewGraph::Node{"event_type", "EventType", e.event_type_id});
    mapped[e.id] = id;
  }
  for (const auto& s : case_graph.snapshots) {
    std::string id = group_node_id(s);
    out.nodes.try_emplace(id, OverviewGraph::Node{"snapshot_group", "SnapshotGroup",
                                                  "type=" + s.object_type_id +
                                                      ";previous=" + s.previous_event_type_id.value_or(kStart) +
                                                      ";updated=" + join(s.updated_attributes, ',')});
    mapped[s.id] = id;
  }
  for (const auto& e : case_graph.edges) {
    auto start = mapped.find(e.start);
    auto end = mapped.find(e.end);
    if (start == mapped.end() || end == mapped.end()) {
      throw FormatError("case graph edge " + e.start + " -> " + e.end + " has an unknown endpoint");
    }
    ++out.edges[{start->second, end->second, edge_type(e.kind), e.qualifier}];
  }
  return out;
}

exporters::ExportSummary export_graph_csv(const GraphExport& graph, const fs::path& out_dir,
                                          quality::QualityReport& report) {
  exporters::ExportSummary summary;
  summary.format = "graph";
  summary.out = out_dir;
  report = quality::run_graph(graph);
  if (!report.passed()) {
    summary.notes.push_back("graph checkpoint failed; nothing written");
    return summary;
  }
  GraphExport sorted = graph;
  sorted.sort();
  sorted.write(out_dir);
  summary.files = {"nodes.csv", "edges.csv"};
  summary.rows["nodes.csv"] = sorted.nodes.size();
  summary.rows["edges.csv"] = sorted.edges.size();
  return summary;
}

}  // namespace ochub::graph
