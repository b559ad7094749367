#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ochub::csv {

/// A parsed CSV file. `lines[i]` is the 1-based physical line on which
/// record `rows[i]` starts (the header is line 1).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  /// Index of `column` in the header, or npos.
  std::size_t column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines,
/// CRLF or LF line endings, optional UTF-8 BOM. Throws FormatError on
/// ragged rows or an unterminated quote, IoError when unreadable.
Table read(const std::filesystem::path& path);
Table parse(std::string_view text, std::string_view origin = "<memory>");

/// Streams rows to a file; quotes only fields that need it.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string escape(std::string_view field);

}  // namespace ochub::csv
