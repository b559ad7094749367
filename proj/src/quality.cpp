#include "ochub/quality.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ochub/csv.hpp"
#include "ochub/errors.hpp"
#include "ochub/timestamp.hpp"

namespace ochub::quality {

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kUniquePrimaryKeys: return "unique_primary_keys";
    case CheckKind::kForeignKeysNotNull: return "foreign_keys_not_null";
    case CheckKind::kReferentialIntegrity: return "referential_integrity";
    case CheckKind::kTimestampValidity: return "timestamp_validity";
    case CheckKind::kGraphNodeUniqueness: return "graph_node_uniqueness";
    case CheckKind::kGraphEdgeEndpoints: return "graph_edge_endpoints";
  }
  return "?";
}

std::string_view to_string(Checkpoint checkpoint) {
  switch (checkpoint) {
    case Checkpoint::kStaging: return "staging";
    case Checkpoint::kTransform: return "transform";
    case Checkpoint::kGraph: return "graph";
  }
  return "?";
}

std::optional<Checkpoint> parse_checkpoint(std::string_view text) {
  for (auto c : {Checkpoint::kStaging, Checkpoint::kTransform, Checkpoint::kGraph}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::size_t QualityReport::count(CheckKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.check == kind; }));
}

std::string QualityReport::summary(std::size_t max_violations) const {
  std::ostringstream out;
  out << "checkpoint " << to_string(checkpoint) << ": " << (passed() ? "PASSED" : "FAILED") << " (" << rows_scanned
      << " rows scanned, " << violations.size() << " violations)\n";
  for (const auto& c : checks) {
    out << "  [" << (c.passed() ? "pass" : "FAIL") << "] " << to_string(c.check);
    if (!c.passed()) out << " (" << c.violations << ")";
    out << '\n';
  }
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == max_violations) {
      out << "  ... " << violations.size() - max_violations << " more\n";
      break;
    }
    out << "  " << to_string(v.check) << " " << v.table << " " << v.key << ": " << v.detail << '\n';
  }
  return out.str();
}

void QualityReport::write_csv(const std::filesystem::path& file) const {
  csv::Writer out(file);
  out.row({"checkpoint", "check", "table", "key", "detail"});
  for (const auto& v : violations) {
    out.row({std::string(to_string(checkpoint)), std::string(to_string(v.check)), v.table, v.key, v.detail});
  }
  out.close();
}

namespace {

using Rows = std::vector<std::vector<Field>>;

bool is_null(const Field& f) { return !f || f->empty(); }

std::string show(const Field& f) { return f ? *f : std::string("NULL"); }

// Ids per table for batch ∪ context.
class KeySets {
 public:
  KeySets(const Batch& rows, const Batch* context) {
    for (const auto& t : schema()) {
      auto& keys = keys_[static_cast<std::size_t>(t.table)];
      for (const auto* source : {&rows, context}) {
        if (!source) continue;
        for (const auto& r : source->rows(t.table)) {
          if (!is_null(r[0])) keys.insert(*r[0]);
        }
      }
    }
  }
  bool contains(Table t, const std::string& id) const { return keys_[static_cast<std::size_t>(t)].count(id) > 0; }

 private:
  std::array<std::unordered_set<std::string>, kTableCount> keys_;
};

// Typed lookups for the same-type consistency rules on attribute values.
template <typename Row>
std::unordered_map<std::string, const Row*> by_id(const std::vector<Row>& a, const std::vector<Row>* b) {
  std::unordered_map<std::string, const Row*> out;
  for (const auto* rows : {&a, b}) {
    if (!rows) continue;
    for (const auto& r : *rows) out.emplace(r.id, &r);
  }
  return out;
}

}  // namespace

std::vector<Violation> check_unique_primary_keys(const Batch& rows, const Batch* context) {
  std::vector<Violation> out;
  for (const auto& t : schema()) {
    std::string name(t.name);
    std::map<std::string, std::vector<std::size_t>> seen;
    Rows batch_rows = rows.rows(t.table);
    for (std::size_t i = 0; i < batch_rows.size(); ++i) {
      const auto& id = batch_rows[i][0];
      if (is_null(id)) {
        out.push_back({CheckKind::kUniquePrimaryKeys, name, "", "id", "", std::nullopt,
                       "null primary key at row " + std::to_string(i + 1)});
        continue;
      }
      seen[*id].push_back(i);
    }
    for (const auto& [id, positions] : seen) {
      if (positions.size() > 1) {
        out.push_back({CheckKind::kUniquePrimaryKeys, name, id, "id", id, std::nullopt,
                       "primary key appears " + std::to_string(positions.size()) + " times"});
      }
    }
    if (!context) continue;
    std::unordered_map<std::string, std::vector<Field>> existing;
    for (auto& r : context->rows(t.table)) {
      if (!is_null(r[0]) && seen.count(*r[0])) existing.emplace(*r[0], std::move(r));
    }
    for (const auto& [id, positions] : seen) {
      auto it = existing.find(id);
      if (positions.size() == 1 && it != existing.end() && it->second != batch_rows[positions[0]]) {
        out.push_back({CheckKind::kUniquePrimaryKeys, name, id, "id", id, std::nullopt,
                       "primary key already stored with different content"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_foreign_keys_not_null(const Batch& rows) {
  std::vector<Violation> out;
  for (const auto& t : schema()) {
    Rows table_rows = rows.rows(t.table);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (!t.columns[c].references) continue;
      for (const auto& r : table_rows) {
        if (is_null(r[c])) {
          out.push_back({CheckKind::kForeignKeysNotNull, std::string(t.name), show(r[0]),
                         std::string(t.columns[c].name), "", std::nullopt,
                         "foreign key " + std::string(t.columns[c].name) + " is null"});
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_referential_integrity(const Batch& rows, const Batch* context) {
  std::vector<Violation> out;
  KeySets keys(rows, context);
  for (const auto& t : schema()) {
    Rows table_rows = rows.rows(t.table);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      const auto& col = t.columns[c];
      if (!col.references) continue;
      for (const auto& r : table_rows) {
        if (is_null(r[c]) || keys.contains(*col.references, *r[c])) continue;
        out.push_back({CheckKind::kReferentialIntegrity, std::string(t.name), show(r[0]), std::string(col.name),
                       *r[c], col.references,
                       std::string(col.name) + " '" + *r[c] + "' not found in " +
                           std::string(table_name(*col.references))});
      }
    }
  }

  // An attribute value must use an attribute of its event's / object's type.
  // Only evaluated when every reference on the path resolves.
  const Batch* ctx = context;
  auto events = by_id(rows.events, ctx ? &ctx->events : nullptr);
  auto event_attributes = by_id(rows.event_attributes, ctx ? &ctx->event_attributes : nullptr);
  for (const auto& v : rows.event_attribute_values) {
    auto e = events.find(v.event_id);
    auto a = event_attributes.find(v.event_attribute_id);
    if (e == events.end() || a == event_attributes.end()) continue;
    const auto& et = e->second->event_type_id;
    if (!keys.contains(Table::kEventTypes, et) || !keys.contains(Table::kEventTypes, a->second->event_type_id)) {
      continue;
    }
    if (a->second->event_type_id != et) {
      out.push_back({CheckKind::kReferentialIntegrity, "event_attribute_values", v.id, "event_attribute_id",
                     v.event_attribute_id, std::nullopt,
                     "attribute '" + v.event_attribute_id + "' belongs to event type '" + a->second->event_type_id +
                         "', event '" + v.event_id + "' has type '" + et + "'"});
    }
  }
  auto objects = by_id(rows.objects, ctx ? &ctx->objects : nullptr);
  auto object_attributes = by_id(rows.object_attributes, ctx ? &ctx->object_attributes : nullptr);
  for (const auto& v : rows.object_attribute_values) {
    auto o = objects.find(v.object_id);
    auto a = object_attributes.find(v.object_attribute_id);
    if (o == objects.end() || a == object_attributes.end()) continue;
    const auto& ot = o->second->object_type_id;
    if (ot == kUnknownObjectType) continue;  // placeholders carry no type constraint
    if (!keys.contains(Table::kObjectTypes, ot) || !keys.contains(Table::kObjectTypes, a->second->object_type_id)) {
      continue;
    }
    if (a->second->object_type_id != ot) {
      out.push_back({CheckKind::kReferentialIntegrity, "object_attribute_values", v.id, "object_attribute_id",
                     v.object_attribute_id, std::nullopt,
                     "attribute '" + v.object_attribute_id + "' belongs to object type '" +
                         a->second->object_type_id + "', object '" + v.object_id + "' has type '" + ot + "'"});
    }
  }
  return out;
}

std::vector<Violation> check_timestamp_validity(const Batch& rows) {
  std::vector<Violation> out;
  for (const auto& t : schema()) {
    Rows table_rows = rows.rows(t.table);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (!t.columns[c].timestamp) continue;
      for (const auto& r : table_rows) {
        if (is_null(r[c])) {
          out.push_back({CheckKind::kTimestampValidity, std::string(t.name), show(r[0]),
                         std::string(t.columns[c].name), "", std::nullopt, "timestamp is null"});
        } else if (!parse_timestamp(*r[c])) {
          out.push_back({CheckKind::kTimestampValidity, std::string(t.name), show(r[0]),
                         std::string(t.columns[c].name), *r[c], std::nullopt,
                         "timestamp '" + *r[c] + "' is not RFC 3339"});
        }
      }
    }
  }
  return out;
}

std::vector<Violation> check_graph_node_uniqueness(const GraphExport& graph) {
  std::vector<Violation> out;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& id = graph.nodes[i].id;
    if (id.empty()) {
      out.push_back({CheckKind::kGraphNodeUniqueness, "nodes.csv", "", "id:ID", "", std::nullopt,
                     "empty node id at row " + std::to_string(i + 1)});
    } else {
      ++counts[id];
    }
  }
  for (const auto& [id, n] : counts) {
    if (n > 1) {
      out.push_back({CheckKind::kGraphNodeUniqueness, "nodes.csv", id, "id:ID", id, std::nullopt,
                     "node id appears " + std::to_string(n) + " times"});
    }
  }
  return out;
}

std::vector<Violation> check_graph_edge_endpoints(const GraphExport& graph) {
  std::vector<Violation> out;
  std::unordered_set<std::string> ids;
  for (const auto& n : graph.nodes) ids.insert(n.id);
  for (const auto& e : graph.edges) {
    bool start_ok = ids.count(e.start) > 0;
    bool end_ok = ids.count(e.end) > 0;
    if (start_ok && end_ok) continue;
    std::string detail;
    if (!start_ok) detail += "start node '" + e.start + "' does not exist";
    if (!end_ok) detail += std::string(detail.empty() ? "" : "; ") + "end node '" + e.end + "' does not exist";
    out.push_back({CheckKind::kGraphEdgeEndpoints, "edges.csv", e.start + "->" + e.end, start_ok ? ":END_ID" : ":START_ID",
                   start_ok ? e.end : e.start, std::nullopt, detail});
  }
  return out;
}

namespace {

QualityReport assemble(Checkpoint checkpoint, std::size_t scanned,
                       std::initializer_list<std::pair<CheckKind, std::vector<Violation>>> results) {
  QualityReport report;
  report.checkpoint = checkpoint;
  report.rows_scanned = scanned;
  for (const auto& [kind, violations] : results) {
    report.checks.push_back({kind, violations.size()});
    report.violations.insert(report.violations.end(), violations.begin(), violations.end());
  }
  return report;
}

QualityReport run_structural(Checkpoint checkpoint, const Batch& rows, const Batch* context) {
  return assemble(checkpoint, rows.total_rows(),
                  {{CheckKind::kUniquePrimaryKeys, check_unique_primary_keys(rows, context)},
                   {CheckKind::kForeignKeysNotNull, check_foreign_keys_not_null(rows)},
                   {CheckKind::kReferentialIntegrity, check_referential_integrity(rows, context)},
                   {CheckKind::kTimestampValidity, check_timestamp_validity(rows)}});
}

}  // namespace

QualityReport run_staging(const Batch& batch, const Batch& store_snapshot) {
  return run_structural(Checkpoint::kStaging, batch, &store_snapshot);
}

QualityReport run_staging(const Batch& batch, const HubStore& store) {
  Batch snapshot = store.snapshot();
  return run_staging(batch, snapshot);
}

QualityReport run_transform(const Batch& store_snapshot) {
  return run_structural(Checkpoint::kTransform, store_snapshot, nullptr);
}

QualityReport run_transform(const HubStore& store) { return run_transform(store.snapshot()); }

QualityReport run_graph(const GraphExport& graph) {
  return assemble(Checkpoint::kGraph, graph.nodes.size() + graph.edges.size(),
                  {{CheckKind::kGraphNodeUniqueness, check_graph_node_uniqueness(graph)},
                   {CheckKind::kGraphEdgeEndpoints, check_graph_edge_endpoints(graph)}});
}

Batch synthesize_missing_objects(const Batch& store_snapshot, const std::vector<Violation>& violations) {
  std::set<std::string> missing;
  for (const auto& v : violations) {
    if (v.check != CheckKind::kReferentialIntegrity || v.referenced_table != Table::kObjects) {
      throw UnsupportedError("unsupported repair: " + std::string(to_string(v.check)) + " on " + v.table + " " +
                             v.key + " (" + v.detail + ")");
    }
    missing.insert(v.value);
  }
  Batch out;
  if (missing.empty()) return out;
  bool have_type = std::any_of(store_snapshot.object_types.begin(), store_snapshot.object_types.end(),
                               [](const ObjectType& t) { return t.id == kUnknownObjectType; });
  if (!have_type) out.object_types.push_back({std::string(kUnknownObjectType), "unknown"});
  for (const auto& id : missing) out.objects.push_back({id, std::string(kUnknownObjectType), id});
  return out;
}

Batch synthesize_missing_objects(const HubStore& store, const std::vector<Violation>& violations) {
  return synthesize_missing_objects(store.snapshot(), violations);
}

}  // namespace ochub::quality
