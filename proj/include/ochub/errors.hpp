#pragma once

#include <stdexcept>
#include <string>

namespace ochub {

/// Base class for every error raised by the hub library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A store, file, or id that was asked for does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or database failure (unwritable location, corrupt file, ...).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input that does not follow the expected layout: bad CSV headers,
/// unparseable timestamps, missing OCEL tables, invalid mapping configs.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A batch row reuses an existing id with different content.
class ConflictError : public Error {
 public:
  ConflictError(std::string table, std::string id, const std::string& what)
      : Error(what), table_(std::move(table)), id_(std::move(id)) {}

  const std::string& table() const noexcept { return table_; }
  const std::string& id() const noexcept { return id_; }

 private:
  std::string table_;
  std::string id_;
};

/// A request the operation does not support (e.g. repairing a missing event).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace ochub
