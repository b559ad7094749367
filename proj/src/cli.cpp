#include "ochub/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "ochub/errors.hpp"
#include "ochub/exporters.hpp"
#include "ochub/graph.hpp"
#include "ochub/importers.hpp"
#include "ochub/quality.hpp"
#include "ochub/queries.hpp"
#include "ochub/store.hpp"

namespace ochub::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string path;
  std::string store;
  std::string format;
  std::string input;
  std::string mapping;
  std::string checkpoint;
  std::string out;
  std::string case_type;
  std::string report;
  bool repair = false;
  bool json = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

importers::ImportResult load_input(const Options& o) {
  if (o.format == "hubcsv") return importers::import_hub_csv(o.input);
  if (o.format == "ocel2") return importers::import_ocel2(o.input);
  if (o.mapping.empty()) throw UsageError("--format mapped requires --mapping");
  return importers::import_mapped_csv(importers::MappingConfig::load(o.mapping), o.input);
}

bool report_quality(const quality::QualityReport& report, const Options& o, std::ostream& out) {
  out << report.summary();
  if (!o.report.empty()) report.write_csv(o.report);
  return report.passed();
}

int cmd_init(const Options& o, std::ostream& out) {
  auto store = HubStore::open(o.path, true);
  out << "initialized hub store at " << store.path().string() << '\n';
  return kOk;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  auto store = HubStore::open(o.store, false);
  auto imported = load_input(o);
  Batch& batch = imported.batch;
  Batch existing = store.snapshot();

  auto staging = quality::run_staging(batch, existing);
  if (!staging.passed() && o.repair) {
    Batch known = existing;
    known.extend(batch);
    Batch repairs;
    try {
      repairs = quality::synthesize_missing_objects(known, staging.violations);
    } catch (const UnsupportedError& e) {
      report_quality(staging, o, out);
      err << e.what() << '\n';
      return kQualityFailure;
    }
    out << "repair: " << repairs.objects.size() << " placeholder objects of type " << quality::kUnknownObjectType
        << '\n';
    batch.extend(repairs);
    staging = quality::run_staging(batch, existing);
  }
  if (!report_quality(staging, o, out)) return kQualityFailure;

  auto summary = store.append(batch);
  out << "appended " << summary.total() << " rows";
  if (summary.total()) out << " (batch " << summary.batch_seq << ")";
  out << '\n';
  for (const auto& t : schema()) {
    if (summary[t.table]) out << "  " << t.name << ": +" << summary[t.table] << '\n';
  }
  if (!imported.skipped.empty()) out << imported.skipped.size() << " source rows skipped\n";

  auto transform = quality::run_transform(store);
  return report_quality(transform, o, out) ? kOk : kQualityFailure;
}

int cmd_check(const Options& o, std::ostream& out) {
  auto checkpoint = quality::parse_checkpoint(o.checkpoint);
  if (!checkpoint) throw UsageError("unknown checkpoint '" + o.checkpoint + "'");
  auto store = HubStore::open(o.store, false);
  switch (*checkpoint) {
    case quality::Checkpoint::kStaging: {
      if (o.input.empty() || o.format.empty()) throw UsageError("staging check requires --input and --format");
      auto imported = load_input(o);
      return report_quality(quality::run_staging(imported.batch, store), o, out) ? kOk : kQualityFailure;
    }
    case quality::Checkpoint::kTransform:
      return report_quality(quality::run_transform(store), o, out) ? kOk : kQualityFailure;
    case quality::Checkpoint::kGraph: {
      GraphExport g;
      if (!o.input.empty()) {
        g = GraphExport::read(o.input);
      } else {
        auto transform = quality::run_transform(store);
        if (!report_quality(transform, o, out)) return kQualityFailure;
        auto case_graph = graph::build_case_graph(store);
        g = case_graph.to_export();
        auto overview = graph::build_overview_graph(case_graph).to_export();
        auto r = quality::run_graph(overview);
        if (!r.passed()) return report_quality(r, o, out) ? kOk : kQualityFailure;
      }
      return report_quality(quality::run_graph(g), o, out) ? kOk : kQualityFailure;
    }
  }
  return kUsage;
}

int cmd_stats(const Options& o, std::ostream& out) {
  auto store = HubStore::open(o.store, false);
  auto stats = summary_stats(store);
  out << (o.json ? stats.to_json() + "\n" : stats.to_text());
  return kOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  if (o.format == "flat" && o.case_type.empty()) throw UsageError("--format flat requires --case-type");
  auto store = HubStore::open(o.store, false);
  Batch data = store.snapshot();
  auto transform = quality::run_transform(data);
  if (!transform.passed()) {
    report_quality(transform, o, out);
    return kQualityFailure;
  }
  exporters::ExportSummary summary;
  if (o.format == "ocel2") {
    summary = exporters::export_ocel2(data, o.out);
  } else if (o.format == "docel") {
    summary = exporters::export_docel(data, o.out);
  } else if (o.format == "flat") {
    summary = exporters::export_flat_csv(data, o.case_type, o.out);
  } else {
    auto case_graph = graph::build_case_graph(HubIndex(std::move(data)));
    GraphExport g = o.format == "graph-case" ? case_graph.to_export()
                                             : graph::build_overview_graph(case_graph).to_export();
    quality::QualityReport report;
    summary = graph::export_graph_csv(g, o.out, report);
    summary.format = o.format;
    if (!report.passed()) {
      report_quality(report, o, out);
      return kQualityFailure;
    }
  }
  out << summary.to_text();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Object-centric event data hub"};
  app.require_subcommand(1);
  Options o;

  auto* init = app.add_subcommand("init", "Create an empty hub store");
  init->add_option("PATH", o.path, "Store directory")->required();

  const std::vector<std::string> input_formats{"hubcsv", "ocel2", "mapped"};
  auto* ingest = app.add_subcommand("ingest", "Import a source and append it to the store");
  ingest->add_option("--store", o.store, "Store directory")->required();
  ingest->add_option("--format", o.format, "Input format")->required()->check(CLI::IsMember(input_formats));
  ingest->add_option("--input", o.input, "Input file or directory")->required();
  ingest->add_option("--mapping", o.mapping, "Mapping config (JSON) for --format mapped");
  ingest->add_flag("--repair-missing-objects", o.repair, "Add placeholder objects for dangling references");
  ingest->add_option("--report", o.report, "Write violations as CSV");

  auto* check = app.add_subcommand("check", "Run a quality checkpoint");
  check->add_option("--store", o.store, "Store directory")->required();
  check->add_option("--checkpoint", o.checkpoint, "staging, transform or graph")
      ->required()
      ->check(CLI::IsMember({"staging", "transform", "graph"}));
  check->add_option("--input", o.input, "Batch to stage, or a graph CSV directory");
  check->add_option("--format", o.format, "Input format for staging")->check(CLI::IsMember(input_formats));
  check->add_option("--mapping", o.mapping, "Mapping config for --format mapped");
  check->add_option("--report", o.report, "Write violations as CSV");

  auto* stats = app.add_subcommand("stats", "Summarize store contents");
  stats->add_option("--store", o.store, "Store directory")->required();
  stats->add_flag("--json", o.json, "Machine-readable output");

  auto* exp = app.add_subcommand("export", "Extract a log or graph from the store");
  exp->add_option("--store", o.store, "Store directory")->required();
  exp->add_option("--format", o.format, "Output format")
      ->required()
      ->check(CLI::IsMember({"ocel2", "docel", "flat", "graph-case", "graph-overview"}));
  exp->add_option("--out", o.out, "Output file or directory")->required();
  exp->add_option("--case-type", o.case_type, "Case object type for --format flat");
  exp->add_option("--report", o.report, "Write violations as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (init->parsed()) return cmd_init(o, out);
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (check->parsed()) return cmd_check(o, out);
    if (stats->parsed()) return cmd_stats(o, out);
    if (exp->parsed()) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConflictError& e) {
    err << "append conflict: " << e.what() << '\n';
    return kConflict;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace ochub::cli
