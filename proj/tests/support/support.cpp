#include "support.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ochub::testing {

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    path_ = fs::temp_directory_path() / ("ochub-test-" + std::to_string(rng()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
}

namespace {

class RawDb {
 public:
  RawDb(const fs::path& file, int flags) {
    if (sqlite3_open_v2(file.string().c_str(), &db_, flags, nullptr) != SQLITE_OK) {
      throw std::runtime_error("cannot open " + file.string());
    }
  }
  ~RawDb() { sqlite3_close_v2(db_); }

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "?";
      sqlite3_free(err);
      throw std::runtime_error(msg + " in " + sql);
    }
  }

  void insert(const std::string& table, const std::vector<Field>& values) {
    std::string sql = "INSERT INTO \"" + table + "\" VALUES (";
    for (std::size_t i = 0; i < values.size(); ++i) sql += i ? ",?" : "?";
    sql += ")";
    sqlite3_stmt* st = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &st, nullptr) != SQLITE_OK) throw std::runtime_error(sql);
    for (std::size_t i = 0; i < values.size(); ++i) {
      int idx = static_cast<int>(i + 1);
      if (values[i]) {
        sqlite3_bind_text(st, idx, values[i]->c_str(), -1, SQLITE_TRANSIENT);
      } else {
        sqlite3_bind_null(st, idx);
      }
    }
    int rc = sqlite3_step(st);
    sqlite3_finalize(st);
    if (rc != SQLITE_DONE) throw std::runtime_error("insert failed: " + sql);
  }

  std::vector<std::vector<Field>> query(const std::string& sql) {
    sqlite3_stmt* st = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &st, nullptr) != SQLITE_OK) {
      throw std::runtime_error(std::string(sqlite3_errmsg(db_)) + " in " + sql);
    }
    std::vector<std::vector<Field>> out;
    while (sqlite3_step(st) == SQLITE_ROW) {
      std::vector<Field> row;
      for (int i = 0; i < sqlite3_column_count(st); ++i) {
        if (sqlite3_column_type(st, i) == SQLITE_NULL) {
          row.emplace_back();
        } else {
          row.emplace_back(reinterpret_cast<const char*>(sqlite3_column_text(st, i)));
        }
      }
      out.push_back(std::move(row));
    }
    sqlite3_finalize(st);
    return out;
  }

 private:
  sqlite3* db_ = nullptr;
};

std::string quoted(const std::string& name) { return "\"" + name + "\""; }

}  // namespace

std::vector<std::vector<Field>> query(const fs::path& file, const std::string& sql) {
  RawDb db(file, SQLITE_OPEN_READONLY);
  return db.query(sql);
}

void write_ocel(const OcelLog& log, const fs::path& file) {
  fs::remove(file);
  RawDb db(file, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  db.exec("BEGIN");
  db.exec("CREATE TABLE event (ocel_id TEXT PRIMARY KEY, ocel_type TEXT)");
  db.exec("CREATE TABLE object (ocel_id TEXT PRIMARY KEY, ocel_type TEXT)");
  db.exec("CREATE TABLE event_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT)");
  db.exec("CREATE TABLE object_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT)");
  db.exec("CREATE TABLE event_object (ocel_event_id TEXT, ocel_object_id TEXT, ocel_qualifier TEXT)");
  db.exec("CREATE TABLE object_object (ocel_source_id TEXT, ocel_target_id TEXT, ocel_qualifier TEXT)");
  for (const auto& t : log.event_types) {
    db.insert("event_map_type", {t.name, t.table});
    std::string ddl = "CREATE TABLE " + quoted("event_" + t.table) + " (ocel_id TEXT, ocel_time TIMESTAMP";
    for (const auto& c : t.columns) ddl += ", " + quoted(c.name) + " " + c.sql_type;
    db.exec(ddl + ")");
  }
  for (const auto& t : log.object_types) {
    db.insert("object_map_type", {t.name, t.table});
    std::string ddl = "CREATE TABLE " + quoted("object_" + t.table) +
                      " (ocel_id TEXT, ocel_time TIMESTAMP, ocel_changed_field TEXT";
    for (const auto& c : t.columns) ddl += ", " + quoted(c.name) + " " + c.sql_type;
    db.exec(ddl + ")");
  }
  for (const auto& [id, type] : log.events) db.insert("event", {id, type});
  for (const auto& [id, type] : log.objects) db.insert("object", {id, type});
  for (const auto& [table, rows] : log.rows) {
    for (const auto& r : rows) db.insert(table, r);
  }
  for (const auto& r : log.event_object) db.insert("event_object", {r[0], r[1], r[2]});
  for (const auto& r : log.object_object) db.insert("object_object", {r[0], r[1], r[2]});
  db.exec("COMMIT");
}

std::vector<OcelLog> ocel_fixtures() {
  std::vector<OcelLog> out;
  const Field null;

  {
    OcelLog l;
    l.name = "minimal";
    l.event_types = {{"place", "place", {}}};
    l.object_types = {{"order", "order", {}}};
    l.events = {{"e1", "place"}, {"e2", "place"}};
    l.objects = {{"o1", "order"}};
    l.rows["event_place"] = {{"e1", "2024-01-01 10:00:00"}, {"e2", "2024-01-01 11:00:00"}};
    l.event_object = {{"e1", "o1", "creates"}, {"e2", "o1", "updates"}};
    out.push_back(l);
  }
  {
    OcelLog l;
    l.name = "attributes";
    l.event_types = {{"pay", "pay", {{"amount", "REAL"}, {"method", "TEXT"}, {"retries", "INTEGER"}}},
                     {"refund", "refund", {{"approved", "BOOLEAN"}}}};
    l.object_types = {{"invoice", "invoice", {{"total", "REAL"}, {"due", "TIMESTAMP"}}},
                      {"customer", "customer", {{"name", "TEXT"}}}};
    l.events = {{"p1", "pay"}, {"p2", "pay"}, {"r1", "refund"}};
    l.objects = {{"i1", "invoice"}, {"i2", "invoice"}, {"c1", "customer"}};
    l.rows["event_pay"] = {{"p1", "2024-02-01T08:00:00Z", "12.5", "card", "0"},
                           {"p2", "2024-02-02T09:30:00.250Z", null, "cash", "2"}};
    l.rows["event_refund"] = {{"r1", "2024-02-03T00:00:00+01:00", "1"}};
    l.rows["object_invoice"] = {{"i1", "1970-01-01 00:00:00", null, "12.5", "2024-03-01T00:00:00Z"},
                                {"i2", "1970-01-01 00:00:00", null, "7", null}};
    l.rows["object_customer"] = {{"c1", "1970-01-01 00:00:00", null, "Ada"}};
    l.event_object = {{"p1", "i1", "pays"}, {"p1", "c1", "payer"}, {"p2", "i2", "pays"}, {"r1", "i1", "reverses"}};
    l.object_object = {{"i1", "c1", "billed_to"}, {"i2", "c1", "billed_to"}};
    out.push_back(l);
  }
  {
    OcelLog l;
    l.name = "changed_fields";
    l.event_types = {{"update", "update", {}}};
    l.object_types = {{"ticket", "ticket", {{"status", "TEXT"}, {"priority", "INTEGER"}}}};
    l.events = {{"u1", "update"}, {"u2", "update"}};
    l.objects = {{"t1", "ticket"}, {"t2", "ticket"}};
    l.rows["object_ticket"] = {
        {"t1", "1970-01-01 00:00:00", null, "open", "3"},
        {"t1", "2024-05-01 12:00:00", "status", "in progress", null},
        {"t1", "2024-05-02 12:00:00", "priority", "null", "1"},
        {"t1", "2024-05-03 12:00:00", "status", "closed", "NULL"},
        {"t2", "1970-01-01 00:00:00", null, "open", "null"},
        {"t2", "2024-05-01 12:00:00", "status", "closed", null},
    };
    l.rows["event_update"] = {{"u1", "2024-05-01 12:00:00"}, {"u2", "2024-05-03 12:00:00"}};
    l.event_object = {{"u1", "t1", "changes"}, {"u1", "t2", "changes"}, {"u2", "t1", "changes"}};
    out.push_back(l);
  }
  {
    OcelLog l;
    l.name = "qualifiers";
    l.event_types = {{"load", "load", {{"weight", "REAL"}}}, {"unload", "unload", {}}};
    l.object_types = {{"container", "container", {}}, {"truck", "truck", {{"plate", "TEXT"}}}};
    l.events = {{"l1", "load"}, {"l2", "load"}, {"x1", "unload"}};
    l.objects = {{"k1", "container"}, {"k2", "container"}, {"tr1", "truck"}};
    l.rows["event_load"] = {{"l1", "2024-06-01 06:00:00", "1000"}, {"l2", "2024-06-01 06:00:00", "900.5"}};
    l.rows["event_unload"] = {{"x1", "2024-06-02 06:00:00"}};
    l.rows["object_truck"] = {{"tr1", "1970-01-01 00:00:00", null, "AB-123"}};
    l.event_object = {{"l1", "k1", "loaded"}, {"l1", "tr1", "vehicle"}, {"l2", "k2", "loaded"},
                      {"l2", "tr1", "vehicle"}, {"x1", "k1", "unloaded"}, {"x1", "k1", "inspected"},
                      {"x1", "tr1", "vehicle"}, {"l1", "k1", "loaded"}};
    l.object_object = {{"k1", "tr1", "on"}, {"k2", "tr1", "on"}, {"k1", "k2", "next to"}, {"k1", "tr1", "on"}};
    out.push_back(l);
  }
  {
    OcelLog l;
    l.name = "type_names";
    l.event_types = {{"Create Purchase Order", "createpurchaseorder", {{"Net Value", "REAL"}}},
                     {"create-purchase-order", "create_purchase_order", {}}};
    l.object_types = {{"Purchase Order", "purchaseorder", {{"Vendor Name", "TEXT"}}},
                      {"purchase order", "purchase_order", {}}};
    l.events = {{"ev 1", "Create Purchase Order"}, {"ev-2", "create-purchase-order"}};
    l.objects = {{"PO 1", "Purchase Order"}, {"po-1", "purchase order"}};
    l.rows["event_createpurchaseorder"] = {{"ev 1", "2023-12-31T23:30:00-02:00", "99.99"}};
    l.rows["event_create_purchase_order"] = {{"ev-2", "2024-01-01T01:30:00.5Z"}};
    l.rows["object_purchaseorder"] = {{"PO 1", "1970-01-01T00:00:00Z", null, "ACME, Inc."},
                                      {"PO 1", "2024-01-01T02:00:00Z", "Vendor Name", "ACME \"Global\""}};
    l.event_object = {{"ev 1", "PO 1", "created"}, {"ev-2", "po-1", "created"}, {"ev-2", "PO 1", "related"}};
    l.object_object = {{"po-1", "PO 1", "copy of"}};
    out.push_back(l);
  }
  {
    OcelLog l;
    l.name = "concurrent";
    l.event_types = {{"b", "b", {}}, {"a", "a", {{"note", "TEXT"}}}};
    l.object_types = {{"case", "case", {{"state", "TEXT"}}}};
    l.events = {{"e2", "a"}, {"e1", "a"}, {"e0", "b"}};
    l.objects = {{"c", "case"}};
    l.rows["event_a"] = {{"e2", "2024-07-01 00:00:00", "second"}, {"e1", "2024-07-01 00:00:00", "first"}};
    l.rows["event_b"] = {{"e0", "2024-07-01 00:00:00"}};
    l.rows["object_case"] = {{"c", "2024-07-01 00:00:00", "state", "busy"}, {"c", "2024-07-01 00:00:00", "state", "busier"}};
    l.event_object = {{"e0", "c", "on"}, {"e1", "c", "on"}, {"e2", "c", "on"}};
    out.push_back(l);
  }
  return out;
}

std::string ts(int minutes) {
  // 2024-01-01 is day 19723 since the epoch.
  long long total = 19723LL * 1440 + minutes;
  long long day = total / 1440;
  int rem = static_cast<int>(total % 1440);
  // Civil date from days (Howard Hinnant's algorithm).
  long long z = day + 719468;
  long long era = (z >= 0 ? z : z - 146096) / 146097;
  long long doe = z - era * 146097;
  long long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long long y = yoe + era * 400;
  long long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  long long mp = (5 * doy + 2) / 153;
  long long d = doy - (153 * mp + 2) / 5 + 1;
  long long m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld-%02lldT%02d:%02d:00.000Z", y, m, d, rem / 60, rem % 60);
  return buf;
}

Batch synthetic_process(const std::string& p, int cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Batch b;
  const std::string et_create = p + ":et:create", et_approve = p + ":et:approve", et_ship = p + ":et:ship",
                    et_close = p + ":et:close";
  const std::string ot_order = p + ":ot:order", ot_item = p + ":ot:item", ot_customer = p + ":ot:customer";
  const std::string q_places = p + ":q:places", q_contains = p + ":q:contains", q_part = p + ":q:part_of",
                    q_status = p + ":q:sets_status";
  b.event_types = {{et_create, "create order"}, {et_approve, "approve order"}, {et_ship, "ship"}, {et_close, "close"}};
  b.event_attributes = {{p + ":ea:amount", et_create, "amount", "float"}, {p + ":ea:carrier", et_ship, "carrier", "string"}};
  b.object_types = {{ot_order, "order"}, {ot_item, "item"}, {ot_customer, "customer"}};
  b.object_attributes = {{p + ":oa:status", ot_order, "status", "string"},
                         {p + ":oa:weight", ot_item, "weight", "float"},
                         {p + ":oa:name", ot_customer, "name", "string"}};
  b.relation_qualifiers = {{q_places, "places", "string"}, {q_contains, "contains", "string"},
                           {q_part, "part of", "string"}, {q_status, "sets status", "string"}};

  const int customers = std::max(1, cases / 3);
  for (int c = 0; c < customers; ++c) {
    std::string id = p + ":customer:" + std::to_string(c);
    b.objects.push_back({id, ot_customer, "customer " + std::to_string(c)});
    b.object_attribute_values.push_back({id + ":name", id, p + ":oa:name", std::string(kEpochSentinel), "name" + std::to_string(c)});
  }
  for (int i = 0; i < cases; ++i) {
    std::string n = std::to_string(i);
    std::string order = p + ":order:" + n;
    std::string customer = p + ":customer:" + std::to_string(i % customers);
    int t0 = i * 60 + pick(0, 30);
    int t1 = t0 + pick(1, 20);
    int t2 = t1 + pick(1, 20);
    int t3 = pick(0, 1) ? t2 : t2 + pick(1, 5);  // ship and close sometimes coincide
    b.objects.push_back({order, ot_order, std::nullopt});
    std::vector<std::string> items;
    for (int k = 0; k < pick(1, 3); ++k) {
      std::string item = p + ":item:" + n + "." + std::to_string(k);
      items.push_back(item);
      b.objects.push_back({item, ot_item, "item"});
      b.object_attribute_values.push_back({item + ":weight", item, p + ":oa:weight", std::string(kEpochSentinel),
                                           std::to_string(pick(1, 50)) + ".5"});
      b.object_to_object.push_back({item + ":part", item, order, std::string(kEpochSentinel), q_part, "part of"});
      b.object_to_object.push_back({order + ":contains:" + std::to_string(k), order, item, ts(t0), q_contains, "contains"});
    }
    std::string ec = p + ":ev:create:" + n, ea = p + ":ev:approve:" + n, es = p + ":ev:ship:" + n,
                ex = p + ":ev:close:" + n;
    b.events.push_back({ec, et_create, ts(t0), std::nullopt});
    b.events.push_back({ea, et_approve, ts(t1), "approval"});
    b.events.push_back({es, et_ship, ts(t2), std::nullopt});
    b.events.push_back({ex, et_close, ts(t3), std::nullopt});
    b.event_attribute_values.push_back({ec + ":amount", ec, p + ":ea:amount", std::to_string(pick(10, 500))});
    b.event_attribute_values.push_back({es + ":carrier", es, p + ":ea:carrier", pick(0, 1) ? "DHL" : "UPS"});
    b.event_to_object.push_back({ec + ":o", ec, order, q_places, "creates"});
    b.event_to_object.push_back({ec + ":c", ec, customer, q_places, "placed by"});
    b.event_to_object.push_back({ea + ":o", ea, order, q_status, "approves"});
    b.event_to_object.push_back({ex + ":o", ex, order, q_status, "closes"});
    for (const auto& item : items) b.event_to_object.push_back({es + ":" + item, es, item, q_contains, "ships"});
    b.event_to_object.push_back({es + ":o", es, order, q_contains, "ships"});
    b.object_to_object.push_back({order + ":cust", order, customer, ts(t0), q_places, "placed by"});
    if (pick(0, 2) == 0) b.object_to_object.push_back({order + ":cust:end", order, customer, ts(t3), q_places, std::nullopt});

    b.object_attribute_values.push_back({order + ":status:0", order, p + ":oa:status", std::string(kEpochSentinel), "new"});
    b.object_attribute_values.push_back({order + ":status:1", order, p + ":oa:status", ts(t1), "approved"});
    b.object_attribute_values.push_back({order + ":status:2", order, p + ":oa:status", ts(t3 + 7), "archived"});
    b.event_to_object_attribute_value.push_back({ea + ":status", ea, order + ":status:1", q_status, "sets"});
    b.event_to_object_attribute_value.push_back({ex + ":status", ex, order + ":status:1", q_status, "reads"});
  }
  b.canonicalize();
  return b;
}

std::vector<Batch> random_partition(const Batch& batch, std::size_t parts, std::mt19937_64& rng) {
  std::vector<Batch> out(parts);
  std::uniform_int_distribution<std::size_t> which(0, parts - 1);
  for (const auto& t : schema()) {
    auto rows = batch.rows(t.table);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (const auto& r : rows) out[which(rng)].add_row(t.table, r);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

Batch tiny_log(int events, int objects, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Batch b;
  b.event_types = {{"A", "a"}, {"B", "b"}};
  b.object_types = {{"X", "x"}, {"Y", "y"}};
  b.object_attributes = {{"X.p", "X", "p", "string"}, {"Y.p", "Y", "p", "string"}, {"X.q", "X", "q", "string"}};
  b.relation_qualifiers = {{"r", "related", "string"}, {"s", "supports", "string"}};
  for (int o = 0; o < objects; ++o) {
    std::string id = "o" + std::to_string(o);
    std::string type = pick(0, 1) ? "X" : "Y";
    b.objects.push_back({id, type, std::nullopt});
    for (int u = 0; u < pick(0, 2); ++u) {
      std::string attr = type == "Y" ? "Y.p" : (pick(0, 1) ? "X.p" : "X.q");
      b.object_attribute_values.push_back(
          {id + ":" + std::to_string(u), id, attr, ts(pick(0, 3)), std::to_string(pick(0, 9))});
    }
  }
  for (int e = 0; e < events; ++e) {
    std::string id = "e" + std::to_string(e);
    b.events.push_back({id, pick(0, 1) ? "A" : "B", ts(pick(0, 2)), std::nullopt});
    for (int o = 0; o < objects; ++o) {
      if (pick(0, 2) > 0) b.event_to_object.push_back({id + "-o" + std::to_string(o), id, "o" + std::to_string(o), "r", ""});
    }
  }
  for (int k = 0; k < pick(0, 3) && objects > 1; ++k) {
    int s = pick(0, objects - 1), t = pick(0, objects - 1);
    if (s == t) continue;
    Field value = pick(0, 3) ? Field{"v" + std::to_string(k)} : Field{};
    b.object_to_object.push_back({"rel" + std::to_string(k), "o" + std::to_string(s), "o" + std::to_string(t),
                                  ts(pick(0, 3)), pick(0, 1) ? "r" : "s", value});
  }
  return b;
}

graph::SnapshotGraph naive_case_graph(const Batch& data) {
  struct Entry {
    std::string time;
    std::string type;
    std::string event;  // empty for a standalone update
    std::vector<std::string> attrs;
  };
  graph::SnapshotGraph g;
  std::map<std::string, std::string> type_of_object;
  for (const auto& o : data.objects) type_of_object[o.id] = o.object_type_id;
  std::map<std::string, const Event*> events;
  for (const auto& e : data.events) events[e.id] = &e;

  std::map<std::string, std::map<std::string, std::string>> last_at;  // object -> time -> snapshot id
  std::set<std::string> event_nodes;
  for (const auto& [object, type] : type_of_object) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    for (const auto& r : data.event_to_object) {
      if (r.object_id != object || !seen.insert(r.event_id).second) continue;
      const Event* e = events.at(r.event_id);
      entries.push_back({e->timestamp, e->event_type_id, e->id, {}});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.time, a.type, a.event) < std::tie(b.time, b.type, b.event);
    });
    std::vector<Entry> updates;
    for (const auto& v : data.object_attribute_values) {
      if (v.object_id != object) continue;
      Entry* host = nullptr;
      for (auto& e : entries) {
        if (e.time == v.timestamp) host = &e;
      }
      if (!host) {
        for (auto& u : updates) {
          if (u.time == v.timestamp) host = &u;
        }
      }
      if (!host) {
        updates.push_back({v.timestamp, "", "", {}});
        host = &updates.back();
      }
      host->attrs.push_back(v.object_attribute_id);
    }
    for (auto& u : updates) entries.push_back(u);
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.time < b.time; });

    std::string previous_snapshot;
    std::optional<std::string> previous_type;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& e = entries[i];
      std::sort(e.attrs.begin(), e.attrs.end());
      e.attrs.erase(std::unique(e.attrs.begin(), e.attrs.end()), e.attrs.end());
      std::size_t ordinal = 0;
      for (std::size_t j = 0; j < i; ++j) ordinal += entries[j].time == e.time;
      std::string sid = "snapshot:" + object + "@" + e.time + (ordinal ? "#" + std::to_string(ordinal) : "");
      if (!e.event.empty()) {
        std::string eid = "event:" + e.event;
        if (event_nodes.insert(eid).second) g.events.push_back({eid, e.event, e.type, e.time});
        if (!previous_snapshot.empty()) g.edges.push_back({graph::EdgeKind::kSnapshotToEvent, previous_snapshot, eid, object, ""});
        g.edges.push_back({graph::EdgeKind::kEventToSnapshot, eid, sid, object, ""});
        previous_type = e.type;
      } else if (!previous_snapshot.empty()) {
        g.edges.push_back({graph::EdgeKind::kSnapshotToSnapshot, previous_snapshot, sid, object, ""});
      }
      graph::SnapshotNode s;
      s.id = sid;
      s.object_id = object;
      s.object_type_id = type;
      s.timestamp = e.time;
      s.time = 0;
      s.ordinal = ordinal;
      s.updated_attributes = e.attrs;
      s.previous_event_type_id = previous_type;
      g.snapshots.push_back(s);
      last_at[object][e.time] = sid;
      previous_snapshot = sid;
    }
  }

  std::set<graph::GraphEdge> o2o;
  for (const auto& r : data.object_to_object) {
    for (const auto& [time, source_snapshot] : last_at[r.source_object_id]) {
      auto target = last_at[r.target_object_id].find(time);
      if (target == last_at[r.target_object_id].end()) continue;
      const ObjectToObject* best = nullptr;
      for (const auto& c : data.object_to_object) {
        if (c.source_object_id != r.source_object_id || c.target_object_id != r.target_object_id ||
            c.qualifier_id != r.qualifier_id || c.timestamp > time) {
          continue;
        }
        if (!best || std::tie(c.timestamp, c.id) > std::tie(best->timestamp, best->id)) best = &c;
      }
      if (best && best->qualifier_value) {
        o2o.insert({graph::EdgeKind::kObjectToObject, source_snapshot, target->second, "", *best->qualifier_value});
      }
    }
  }
  g.edges.insert(g.edges.end(), o2o.begin(), o2o.end());
  g.sort();
  return g;
}

Batch tiebreak_fixture() {
  Batch b;
  b.event_types = {{"et:b", "beta"}, {"et:a", "alpha"}};
  b.object_types = {{"ot:case", "case"}};
  b.object_attributes = {{"oa:case:state", "ot:case", "state", "string"}};
  b.relation_qualifiers = {{"q:on", "on", "string"}};
  b.objects = {{"c1", "ot:case", std::nullopt}, {"c2", "ot:case", std::nullopt}};
  const std::string noon = "2024-03-01T12:00:00.000Z";
  b.events = {{"z1", "et:a", noon, std::nullopt},
              {"a9", "et:b", noon, std::nullopt},
              {"a2", "et:a", noon, std::nullopt},
              {"m0", "et:a", "2024-03-01T11:00:00.000Z", std::nullopt}};
  for (const auto* e : {"z1", "a9", "a2", "m0"}) {
    b.event_to_object.push_back({std::string("x:") + e + ":c1", e, "c1", "q:on", "on"});
    b.event_to_object.push_back({std::string("x:") + e + ":c2", e, "c2", "q:on", "on"});
  }
  b.object_attribute_values = {{"v1", "c1", "oa:case:state", noon, "busy"},
                               {"v2", "c1", "oa:case:state", "2024-03-01T12:30:00.000Z", "idle"}};
  return b;
}

namespace {

Batch with_cell(const Batch& data, Table table, std::size_t row, std::size_t column, const Field& value) {
  Batch out;
  for (const auto& t : schema()) {
    auto rows = data.rows(t.table);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (t.table == table && i == row) rows[i][column] = value;
      out.add_row(t.table, rows[i]);
    }
  }
  return out;
}

// Random (table, row, column) among non-empty tables with a matching column.
template <typename Pred>
std::tuple<Table, std::size_t, std::size_t> pick_cell(const Batch& data, Pred wanted, std::mt19937_64& rng) {
  std::vector<std::tuple<Table, std::size_t, std::size_t>> cells;
  for (const auto& t : schema()) {
    std::size_t n = data.size(t.table);
    if (!n) continue;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (wanted(t.columns[c])) cells.emplace_back(t.table, n, c);
    }
  }
  auto [table, n, column] = cells.at(std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng));
  return {table, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng), column};
}

}  // namespace

std::string inject_violation(quality::CheckKind kind, Batch& data, GraphExport& graph, std::mt19937_64& rng) {
  using quality::CheckKind;
  auto any = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  switch (kind) {
    case CheckKind::kUniquePrimaryKeys: {
      auto [table, row, column] = pick_cell(data, [](const ColumnSpec& c) { return c.name == "id"; }, rng);
      auto copy = data.rows(table)[row];
      data.add_row(table, copy);
      return "duplicated " + std::string(table_name(table)) + " " + *copy[0];
    }
    case CheckKind::kForeignKeysNotNull: {
      auto [table, row, column] = pick_cell(data, [](const ColumnSpec& c) { return c.references.has_value(); }, rng);
      data = with_cell(data, table, row, column, std::string());
      return "nulled " + std::string(table_name(table)) + "." + std::string(spec(table).columns[column].name);
    }
    case CheckKind::kReferentialIntegrity: {
      auto [table, row, column] = pick_cell(data, [](const ColumnSpec& c) { return c.references.has_value(); }, rng);
      data = with_cell(data, table, row, column, "ghost-" + std::to_string(rng() % 100000));
      return "dangling " + std::string(table_name(table)) + "." + std::string(spec(table).columns[column].name);
    }
    case CheckKind::kTimestampValidity: {
      auto [table, row, column] = pick_cell(data, [](const ColumnSpec& c) { return c.timestamp; }, rng);
      const char* junk[] = {"not a time", "2024-13-40", "31/12/2024", ""};
      data = with_cell(data, table, row, column, std::string(junk[any(4)]));
      return "broke timestamp in " + std::string(table_name(table));
    }
    case CheckKind::kGraphNodeUniqueness: {
      auto node = graph.nodes.at(any(graph.nodes.size()));
      node.detail += " (copy)";
      graph.nodes.push_back(node);
      return "duplicated node " + node.id;
    }
    case CheckKind::kGraphEdgeEndpoints: {
      auto& edge = graph.edges.at(any(graph.edges.size()));
      (any(2) ? edge.start : edge.end) = "missing:" + std::to_string(rng() % 100000);
      return "broke edge endpoint";
    }
  }
  return "";
}

}  // namespace ochub::testing
