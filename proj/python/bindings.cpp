#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ochub/cli.hpp"
#include "ochub/errors.hpp"
#include "ochub/exporters.hpp"
#include "ochub/graph.hpp"
#include "ochub/importers.hpp"
#include "ochub/quality.hpp"
#include "ochub/queries.hpp"
#include "ochub/store.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace ochub;

namespace {

py::dict report_dict(const quality::QualityReport& report) {
  py::dict checks;
  for (const auto& c : report.checks) checks[py::str(std::string(quality::to_string(c.check)))] = c.violations;
  py::list violations;
  for (const auto& v : report.violations) {
    py::dict d;
    d["check"] = std::string(quality::to_string(v.check));
    d["table"] = v.table;
    d["key"] = v.key;
    d["column"] = v.column;
    d["value"] = v.value;
    d["detail"] = v.detail;
    violations.append(d);
  }
  py::dict out;
  out["checkpoint"] = std::string(quality::to_string(report.checkpoint));
  out["passed"] = report.passed();
  out["rows_scanned"] = report.rows_scanned;
  out["checks"] = checks;
  out["violations"] = violations;
  return out;
}

py::dict summary_dict(const exporters::ExportSummary& s) {
  py::dict out;
  out["format"] = s.format;
  out["out"] = s.out.string();
  out["files"] = s.files;
  out["rows"] = s.rows;
  out["notes"] = s.notes;
  out["duplication_factor"] = s.duplication_factor;
  return out;
}

py::dict graph_dict(const GraphExport& g) {
  py::list nodes, edges;
  for (const auto& n : g.nodes) {
    nodes.append(py::dict(py::arg("id") = n.id, py::arg("kind") = n.kind, py::arg("label") = n.label,
                          py::arg("timestamp") = n.timestamp, py::arg("detail") = n.detail));
  }
  for (const auto& e : g.edges) {
    edges.append(py::dict(py::arg("start") = e.start, py::arg("end") = e.end, py::arg("type") = e.type,
                          py::arg("object") = e.object, py::arg("qualifier") = e.qualifier,
                          py::arg("frequency") = e.frequency));
  }
  py::dict out;
  out["nodes"] = nodes;
  out["edges"] = edges;
  return out;
}

importers::ImportResult load(const std::string& format, const fs::path& input, const std::optional<fs::path>& mapping) {
  if (format == "ocel2") return importers::import_ocel2(input);
  if (format == "hubcsv") return importers::import_hub_csv(input);
  if (format == "mapped") {
    if (!mapping) throw py::value_error("format 'mapped' needs a mapping config");
    return importers::import_mapped_csv(importers::MappingConfig::load(*mapping), input);
  }
  throw py::value_error("unknown input format '" + format + "'");
}

// Stage, optionally repair, append, then check the whole store.
py::dict ingest(HubStore& store, const std::string& format, const fs::path& input,
                const std::optional<fs::path>& mapping, bool repair) {
  auto imported = load(format, input, mapping);
  Batch& batch = imported.batch;
  Batch existing = store.snapshot();
  auto staging = quality::run_staging(batch, existing);
  std::size_t placeholders = 0;
  if (!staging.passed() && repair) {
    Batch known = existing;
    known.extend(batch);
    Batch repairs = quality::synthesize_missing_objects(known, staging.violations);
    placeholders = repairs.objects.size();
    batch.extend(repairs);
    staging = quality::run_staging(batch, existing);
  }
  py::dict out;
  out["staging"] = report_dict(staging);
  out["placeholders"] = placeholders;
  out["skipped"] = imported.skipped.size();
  if (!staging.passed()) {
    out["appended"] = false;
    return out;
  }
  auto summary = store.append(batch);
  py::dict added;
  for (const auto& t : schema()) added[py::str(std::string(t.name))] = summary[t.table];
  out["appended"] = true;
  out["added"] = added;
  out["batch_seq"] = summary.batch_seq;
  out["transform"] = report_dict(quality::run_transform(store));
  return out;
}

py::dict check(const HubStore& store, const std::string& checkpoint) {
  auto cp = quality::parse_checkpoint(checkpoint);
  if (!cp || *cp == quality::Checkpoint::kStaging) {
    throw py::value_error("checkpoint must be 'transform' or 'graph'");
  }
  if (*cp == quality::Checkpoint::kTransform) return report_dict(quality::run_transform(store));
  return report_dict(quality::run_graph(graph::build_case_graph(store).to_export()));
}

py::dict export_store(const HubStore& store, const std::string& format, const fs::path& out,
                      const std::optional<std::string>& case_type) {
  if (format == "ocel2") return summary_dict(exporters::export_ocel2(store, out));
  if (format == "docel") return summary_dict(exporters::export_docel(store, out));
  if (format == "flat") {
    if (!case_type) throw py::value_error("format 'flat' needs case_type");
    return summary_dict(exporters::export_flat_csv(store, *case_type, out));
  }
  if (format == "graph-case" || format == "graph-overview") {
    auto case_graph = graph::build_case_graph(store);
    GraphExport g = format == "graph-case" ? case_graph.to_export() : graph::build_overview_graph(case_graph).to_export();
    quality::QualityReport report;
    auto summary = graph::export_graph_csv(g, out, report);
    summary.format = format;
    auto d = summary_dict(summary);
    d["quality"] = report_dict(report);
    return d;
  }
  throw py::value_error("unknown export format '" + format + "'");
}

py::list timeline(const HubStore& store, const std::string& object_id) {
  py::list out;
  for (const auto& e : object_timeline(store, object_id)) {
    py::dict d;
    d["timestamp"] = e.timestamp;
    d["event_id"] = e.event_id;
    d["event_type_id"] = e.event_type_id;
    d["attribute_value_ids"] = e.attribute_value_ids;
    d["updated_attributes"] = e.updated_attributes;
    out.append(d);
  }
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"ochub"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Object-centric event data hub";

  static py::exception<Error> base(m, "HubError", PyExc_RuntimeError);
  py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ConflictError>(m, "ConflictError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());

  py::class_<HubStore>(m, "Store")
      .def_static("open", &HubStore::open, py::arg("path"), py::arg("create") = false,
                  "Opens the store in directory `path`; `create` initialises a missing one.")
      .def_property_readonly("path", &HubStore::path)
      .def_property_readonly("batch_count", &HubStore::batch_count)
      .def(
          "count",
          [](const HubStore& s, const std::string& table) {
            auto t = table_from_name(table);
            if (!t) throw py::key_error(table);
            return s.count(*t);
          },
          py::arg("table"))
      .def("inventory", &HubStore::inventory)
      .def("ingest", &ingest, py::arg("format"), py::arg("input"), py::arg("mapping") = std::nullopt,
           py::arg("repair") = false,
           "Stages, optionally repairs, and appends one input; returns the quality reports and row counts.")
      .def("check", &check, py::arg("checkpoint") = "transform")
      .def("stats",
           [](const HubStore& s) { return py::module_::import("json").attr("loads")(summary_stats(s).to_json()); })
      .def("export", &export_store, py::arg("format"), py::arg("out"), py::arg("case_type") = std::nullopt)
      .def("timeline", &timeline, py::arg("object_id"))
      .def(
          "o2o_valid_at",
          [](const HubStore& s, const std::string& source, const std::string& target, const std::string& qualifier,
             const std::string& at) { return o2o_valid_at(s, source, target, qualifier, at); },
          py::arg("source"), py::arg("target"), py::arg("qualifier"), py::arg("at"))
      .def(
          "case_graph",
          [](const HubStore& s, const std::vector<std::string>& ids) {
            return graph_dict(graph::build_case_graph(s, ids).to_export());
          },
          py::arg("object_ids") = std::vector<std::string>{})
      .def("overview_graph", [](const HubStore& s) {
        return graph_dict(graph::build_overview_graph(graph::build_case_graph(s)).to_export());
      });

  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
