#pragma once

#include <sqlite3.h>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ochub/errors.hpp"

namespace ochub::sqlite {

class Statement;

/// Owning sqlite3 connection.
class Database {
 public:
  Database() = default;
  Database(const std::filesystem::path& path, int flags) {
    sqlite3* raw = nullptr;
    int rc = sqlite3_open_v2(path.string().c_str(), &raw, flags, nullptr);
    db_ = raw;
    if (rc != SQLITE_OK) {
      std::string msg = raw ? sqlite3_errmsg(raw) : "out of memory";
      close();
      throw IoError("cannot open " + path.string() + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 10000);
  }
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  Database(Database&& other) noexcept : db_(std::exchange(other.db_, nullptr)) {}
  Database& operator=(Database&& other) noexcept {
    if (this != &other) {
      close();
      db_ = std::exchange(other.db_, nullptr);
    }
    return *this;
  }
  ~Database() { close(); }

  void exec(std::string_view sql) {
    char* err = nullptr;
    std::string text(sql);
    if (sqlite3_exec(db_, text.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw IoError("sqlite: " + msg + " in: " + text.substr(0, 200));
    }
  }

  bool has_table(std::string_view name);

  sqlite3* get() const { return db_; }
  std::string error() const { return sqlite3_errmsg(db_); }

 private:
  void close() {
    if (db_) sqlite3_close_v2(db_);
    db_ = nullptr;
  }
  sqlite3* db_ = nullptr;
};

/// Prepared statement; `step()` returns true while rows are available.
class Statement {
 public:
  Statement(Database& db, std::string_view sql) : db_(&db) {
    if (sqlite3_prepare_v2(db.get(), sql.data(), static_cast<int>(sql.size()), &stmt_, nullptr) != SQLITE_OK) {
      throw IoError("sqlite prepare failed: " + db.error() + " in: " + std::string(sql.substr(0, 200)));
    }
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  void bind(int index, const std::optional<std::string>& value) {
    int rc = value ? sqlite3_bind_text(stmt_, index, value->data(), static_cast<int>(value->size()),
                                       SQLITE_TRANSIENT)
                   : sqlite3_bind_null(stmt_, index);
    if (rc != SQLITE_OK) throw IoError("sqlite bind failed: " + db_->error());
  }
  void bind_int(int index, sqlite3_int64 value) { sqlite3_bind_int64(stmt_, index, value); }
  void bind_double(int index, double value) { sqlite3_bind_double(stmt_, index, value); }

  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw IoError("sqlite step failed: " + db_->error());
  }

  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  int columns() const { return sqlite3_column_count(stmt_); }
  std::string column_name(int i) const { return sqlite3_column_name(stmt_, i); }
  bool is_null(int i) const { return sqlite3_column_type(stmt_, i) == SQLITE_NULL; }
  int type(int i) const { return sqlite3_column_type(stmt_, i); }

  std::optional<std::string> text(int i) const {
    if (is_null(i)) return std::nullopt;
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, i));
    int n = sqlite3_column_bytes(stmt_, i);
    return std::string(p ? p : "", static_cast<std::size_t>(n));
  }

  sqlite3_int64 integer(int i) const { return sqlite3_column_int64(stmt_, i); }

 private:
  Database* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

inline bool Database::has_table(std::string_view name) {
  Statement st(*this, "SELECT 1 FROM sqlite_master WHERE type='table' AND name=?1");
  st.bind(1, std::string(name));
  return st.step();
}

/// Double-quotes an identifier for use in generated SQL.
inline std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace ochub::sqlite
