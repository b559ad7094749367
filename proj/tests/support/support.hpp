#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ochub/graph.hpp"
#include "ochub/quality.hpp"
#include "ochub/schema.hpp"

namespace ochub::testing {

namespace fs = std::filesystem;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& file);
void write_file(const fs::path& file, const std::string& text);

/// Plain description of an OCEL 2.0 SQLite log, written with raw SQL.
struct OcelLog {
  struct Column {
    std::string name;
    std::string sql_type;
  };
  struct Type {
    std::string name;
    std::string table;  // suffix after event_ / object_
    std::vector<Column> columns;
  };
  std::string name;
  std::vector<Type> event_types;
  std::vector<Type> object_types;
  std::vector<std::pair<std::string, std::string>> events;   // (id, type)
  std::vector<std::pair<std::string, std::string>> objects;  // (id, type)
  /// Rows of event_<table> / object_<table>, keyed by the full table name.
  /// Event rows: ocel_id, ocel_time, columns...; object rows: ocel_id,
  /// ocel_time, ocel_changed_field, columns...
  std::map<std::string, std::vector<std::vector<Field>>> rows;
  std::vector<std::array<std::string, 3>> event_object;
  std::vector<std::array<std::string, 3>> object_object;
};

void write_ocel(const OcelLog& log, const fs::path& file);
std::vector<OcelLog> ocel_fixtures();

/// Runs a query against any SQLite file and returns all cells as text.
std::vector<std::vector<Field>> query(const fs::path& file, const std::string& sql);

/// A small order-to-delivery process with every table populated. All type,
/// object and event ids carry `prefix`, so two prefixes never overlap.
Batch synthetic_process(const std::string& prefix, int cases, std::uint64_t seed);

/// Splits every table of `batch` into `parts` random chunks and returns
/// them in a random order.
std::vector<Batch> random_partition(const Batch& batch, std::size_t parts, std::mt19937_64& rng);

/// Tiny random log for graph oracles: up to `events` events and `objects`
/// objects over a coarse time grid, with attribute updates and relations.
Batch tiny_log(int events, int objects, std::uint64_t seed);

/// Straightforward re-implementation of the case graph rules, used as an
/// oracle: sort each object's events and updates, splice, chain, relate.
graph::SnapshotGraph naive_case_graph(const Batch& data);

/// Two objects sharing three events at one instant plus a standalone update.
Batch tiebreak_fixture();

/// Injects exactly one violation of `kind`: structural kinds mutate
/// `data`, graph kinds mutate `graph`. Returns a description of the change.
std::string inject_violation(quality::CheckKind kind, Batch& data, GraphExport& graph, std::mt19937_64& rng);

std::string ts(int minutes);  // 2024-01-01T00:00Z + minutes, canonical text

}  // namespace ochub::testing
