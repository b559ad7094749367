#include "ochub/store.hpp"

#include <mutex>
#include <numeric>

#include "ochub/errors.hpp"
#include "ochub/timestamp.hpp"
#include "sqlite.hpp"

namespace ochub {

namespace fs = std::filesystem;

std::size_t AppendSummary::total() const { return std::accumulate(added.begin(), added.end(), std::size_t{0}); }

struct HubStore::Impl {
  fs::path dir;
  sqlite::Database db;
  mutable std::mutex mutex;
};

namespace {

std::string create_table_sql(const TableSpec& t) {
  std::string sql = "CREATE TABLE " + std::string(t.name) + " (";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    const auto& c = t.columns[i];
    if (i) sql += ", ";
    sql += std::string(c.name) + " TEXT";
    if (i == 0) sql += " PRIMARY KEY";
    if (!c.nullable) sql += " NOT NULL";
  }
  sql += ")";
  return sql;
}

std::string select_sql(const TableSpec& t) {
  std::string sql = "SELECT ";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) sql += ", ";
    sql += t.columns[i].name;
  }
  return sql + " FROM " + std::string(t.name);
}

std::string insert_sql(const TableSpec& t) {
  std::string sql = "INSERT OR IGNORE INTO " + std::string(t.name) + " VALUES (";
  for (std::size_t i = 0; i < t.columns.size(); ++i) sql += i ? ", ?" : "?";
  return sql + ")";
}

void initialise(sqlite::Database& db) {
  db.exec("BEGIN IMMEDIATE");
  try {
    db.exec("CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL)");
    db.exec("INSERT INTO meta VALUES ('layout_version', '" + std::to_string(kLayoutVersion) + "')");
    db.exec("CREATE TABLE batch_log (seq INTEGER PRIMARY KEY, appended_at TEXT NOT NULL, rows INTEGER NOT NULL)");
    for (const auto& t : schema()) db.exec(create_table_sql(t));
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
}

void verify_layout(sqlite::Database& db, const fs::path& file) {
  if (!db.has_table("meta")) throw IoError("unrecognized store layout in " + file.string());
  sqlite::Statement st(db, "SELECT value FROM meta WHERE key='layout_version'");
  if (!st.step() || st.text(0) != std::to_string(kLayoutVersion)) {
    throw IoError("unrecognized store layout version in " + file.string());
  }
  for (const auto& t : schema()) {
    if (!db.has_table(t.name)) throw IoError("store is missing table " + std::string(t.name));
  }
}

// Rolls back unless committed.
class Transaction {
 public:
  explicit Transaction(sqlite::Database& db) : db_(db) { db_.exec("BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) {
      try {
        db_.exec("ROLLBACK");
      } catch (...) {
      }
    }
  }
  void commit() {
    db_.exec("COMMIT");
    done_ = true;
  }

 private:
  sqlite::Database& db_;
  bool done_ = false;
};

std::string now_utc() {
  auto now = std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return format_timestamp(now.time_since_epoch().count());
}

std::string render(const std::vector<Field>& row) {
  std::string out = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ", ";
    out += row[i] ? "'" + *row[i] + "'" : "NULL";
  }
  return out + ")";
}

}  // namespace

HubStore::HubStore(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
HubStore::HubStore(HubStore&&) noexcept = default;
HubStore& HubStore::operator=(HubStore&&) noexcept = default;
HubStore::~HubStore() = default;

HubStore HubStore::open(const fs::path& dir, bool create_if_missing) {
  fs::path file = dir / kStoreFileName;
  std::error_code ec;
  bool exists = fs::exists(file, ec);
  if (!exists && !create_if_missing) throw NotFoundError("store not found: " + dir.string());
  if (!exists) {
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create store directory " + dir.string() + ": " + ec.message());
  }

  auto impl = std::make_unique<Impl>();
  impl->dir = dir;
  impl->db = sqlite::Database(file, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX);
  impl->db.exec("PRAGMA journal_mode=WAL");
  impl->db.exec("PRAGMA synchronous=NORMAL");
  if (!exists) {
    initialise(impl->db);
  } else {
    verify_layout(impl->db, file);
  }
  return HubStore(std::move(impl));
}

AppendSummary HubStore::append(const Batch& batch) {
  std::lock_guard lock(impl_->mutex);
  auto& db = impl_->db;
  AppendSummary summary;
  Transaction tx(db);

  for (const auto& t : schema()) {
    auto rows = batch.rows(t.table);
    if (rows.empty()) continue;
    sqlite::Statement insert(db, insert_sql(t));
    sqlite::Statement lookup(db, select_sql(t) + " WHERE id = ?1");
    std::size_t added = 0;
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) insert.bind(static_cast<int>(i + 1), row[i]);
      try {
        insert.step();
      } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (table " + std::string(t.name) + ", row " + render(row) + ")");
      }
      insert.reset();
      if (sqlite3_changes(db.get()) == 1) {
        ++added;
        continue;
      }
      lookup.bind(1, row[0]);
      std::vector<Field> existing;
      if (lookup.step()) {
        for (int i = 0; i < lookup.columns(); ++i) existing.push_back(lookup.text(i));
      }
      lookup.reset();
      if (existing != row) {
        throw ConflictError(std::string(t.name), row[0].value_or(""),
                            "append conflict in " + std::string(t.name) + ": id '" + row[0].value_or("") +
                                "' exists with different content " + render(existing) + " vs " + render(row));
      }
    }
    summary.added[static_cast<std::size_t>(t.table)] = added;
  }

  if (summary.total() > 0) {
    sqlite::Statement log(db, "INSERT INTO batch_log (appended_at, rows) VALUES (?1, ?2)");
    log.bind(1, now_utc());
    log.bind_int(2, static_cast<sqlite3_int64>(summary.total()));
    log.step();
    summary.batch_seq = sqlite3_last_insert_rowid(db.get());
  } else {
    sqlite::Statement seq(db, "SELECT COALESCE(MAX(seq), 0) FROM batch_log");
    seq.step();
    summary.batch_seq = seq.integer(0);
  }
  tx.commit();
  return summary;
}

Batch HubStore::snapshot() const {
  std::lock_guard lock(impl_->mutex);
  Batch out;
  // One read transaction so all tables come from the same committed state.
  impl_->db.exec("BEGIN");
  try {
    for (const auto& t : schema()) {
      sqlite::Statement st(impl_->db, select_sql(t) + " ORDER BY id");
      std::vector<Field> row(t.columns.size());
      while (st.step()) {
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = st.text(static_cast<int>(i));
        out.add_row(t.table, row);
      }
    }
    impl_->db.exec("COMMIT");
  } catch (...) {
    impl_->db.exec("ROLLBACK");
    throw;
  }
  return out;
}

std::size_t HubStore::count(Table table) const {
  std::lock_guard lock(impl_->mutex);
  sqlite::Statement st(impl_->db, "SELECT COUNT(*) FROM " + std::string(table_name(table)));
  st.step();
  return static_cast<std::size_t>(st.integer(0));
}

std::optional<std::vector<Field>> HubStore::find(Table table, const std::string& id) const {
  std::lock_guard lock(impl_->mutex);
  sqlite::Statement st(impl_->db, select_sql(spec(table)) + " WHERE id = ?1");
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  std::vector<Field> row;
  for (int i = 0; i < st.columns(); ++i) row.push_back(st.text(i));
  return row;
}

SchemaInventory HubStore::inventory() const {
  std::lock_guard lock(impl_->mutex);
  SchemaInventory out;
  sqlite::Statement tables(impl_->db, "SELECT name FROM sqlite_master WHERE type='table' ORDER BY name");
  while (tables.step()) {
    std::string name = *tables.text(0);
    sqlite::Statement cols(impl_->db, "PRAGMA table_info(" + sqlite::quote_ident(name) + ")");
    auto& list = out[name];
    while (cols.step()) list.push_back(*cols.text(1));
  }
  return out;
}

std::int64_t HubStore::batch_count() const {
  std::lock_guard lock(impl_->mutex);
  sqlite::Statement st(impl_->db, "SELECT COUNT(*) FROM batch_log");
  st.step();
  return st.integer(0);
}

const fs::path& HubStore::path() const { return impl_->dir; }

}  // namespace ochub
