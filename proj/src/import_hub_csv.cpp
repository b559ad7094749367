#include <algorithm>
#include <set>

#include "batch_builder.hpp"
#include "ochub/csv.hpp"
#include "ochub/importers.hpp"
#include "ochub/timestamp.hpp"

namespace ochub::importers {

namespace fs = std::filesystem;

ImportResult import_hub_csv(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw NotFoundError("hub-CSV directory not found: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (name.starts_with(".")) continue;
    auto stem = entry.path().stem().string();
    if (entry.path().extension() != ".csv" || !table_from_name(stem)) {
      throw FormatError("unknown file in hub-CSV directory: " + name);
    }
    files.push_back(entry.path());
  }

  ImportResult result;
  result.provenance = {"hubcsv", dir.string(), now_utc_text()};
  // Schema order keeps the batch layout independent of directory listing order.
  for (const auto& t : schema()) {
    fs::path file = dir / (std::string(t.name) + ".csv");
    if (std::find(files.begin(), files.end(), file) == files.end()) continue;
    auto table = csv::read(file);
    const std::string fname = file.filename().string();

    std::vector<std::size_t> position;
    for (const auto& col : t.columns) {
      auto i = table.column(col.name);
      if (i == std::string::npos) {
        throw FormatError(fname + ": header is missing column '" + std::string(col.name) + "'");
      }
      position.push_back(i);
    }
    for (const auto& h : table.header) {
      bool known = std::any_of(t.columns.begin(), t.columns.end(), [&](const ColumnSpec& c) { return c.name == h; });
      if (!known) throw FormatError(fname + ": unexpected column '" + h + "'");
    }

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& raw = table.rows[r];
      std::vector<Field> row;
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const auto& col = t.columns[c];
        const std::string& cell = raw[position[c]];
        if (col.timestamp && !parse_timestamp(cell)) {
          throw FormatError(fname + ":" + std::to_string(table.lines[r]) + ": malformed timestamp '" + cell +
                            "' in column " + std::string(col.name));
        }
        if (col.nullable && cell.empty()) {
          row.emplace_back(std::nullopt);
        } else {
          row.emplace_back(cell);
        }
      }
      result.batch.add_row(t.table, row);
      result.origins.push_back({t.table, row[0].value_or(""), fname, table.lines[r]});
    }
  }
  return result;
}

void write_hub_csv(const Batch& batch, const fs::path& dir, bool all_tables) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : schema()) {
    auto rows = batch.rows(t.table);
    if (rows.empty() && !all_tables) continue;
    csv::Writer out(dir / (std::string(t.name) + ".csv"));
    std::vector<std::string> header;
    for (const auto& c : t.columns) header.emplace_back(c.name);
    out.row(header);
    for (const auto& r : rows) {
      std::vector<std::string> cells;
      for (const auto& f : r) cells.push_back(f.value_or(""));
      out.row(cells);
    }
    out.close();
  }
}

}  // namespace ochub::importers
