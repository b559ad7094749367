#include <doctest.h>

#include <json.hpp>
#include <random>

#include "ochub/errors.hpp"
#include "ochub/queries.hpp"
#include "support/support.hpp"

using namespace ochub;
using ochub::testing::ts;

namespace {

std::vector<std::string> event_sequence(const std::vector<TimelineEntry>& timeline) {
  std::vector<std::string> out;
  for (const auto& e : timeline) out.push_back(e.event_id.value_or("-"));
  return out;
}

}  // namespace

TEST_CASE("timeline orders simultaneous events by type then id") {
  HubIndex index(ochub::testing::tiebreak_fixture());
  auto t = index.timeline("c1");
  // m0 at 11:00; at noon et:a < et:b, and within et:a a2 < z1; then the 12:30 update.
  CHECK(event_sequence(t) == std::vector<std::string>{"m0", "a2", "z1", "a9", "-"});
  // The noon update merges into the last noon event.
  CHECK(t[3].updated_attributes == std::vector<std::string>{"oa:case:state"});
  CHECK(t[3].attribute_value_ids == std::vector<std::string>{"v1"});
  CHECK(t[1].updated_attributes.empty());
  CHECK(t[4].timestamp == "2024-03-01T12:30:00.000Z");
  CHECK_FALSE(t[4].is_event());
  CHECK(event_sequence(index.timeline("c2")) == std::vector<std::string>{"m0", "a2", "z1", "a9"});
}

TEST_CASE("timeline errors") {
  Batch b = ochub::testing::tiebreak_fixture();
  b.events[0].timestamp = "soon";
  HubIndex index(std::move(b));
  CHECK_THROWS_AS(index.timeline("nobody"), NotFoundError);
  CHECK_THROWS_AS(index.timeline("c1"), FormatError);
}

TEST_CASE("property: timeline is independent of row order") {
  std::mt19937_64 rng(5);
  for (int seed = 0; seed < 30; ++seed) {
    Batch b = ochub::testing::tiny_log(4, 3, seed);
    HubIndex reference(b);
    b.for_each_table([&](auto& rows) { std::shuffle(rows.begin(), rows.end(), rng); });
    HubIndex shuffled(b);
    for (const auto& o : b.objects) CHECK(reference.timeline(o.id) == shuffled.timeline(o.id));
  }
}

TEST_CASE("o2o_valid_at picks the latest row at or before the instant") {
  Batch b;
  b.objects = {{"a", "t", std::nullopt}, {"b", "t", std::nullopt}};
  b.relation_qualifiers = {{"reports_to", "reports to", "string"}};
  b.object_to_object = {{"r1", "a", "b", ts(10), "reports_to", "manager"},
                        {"r2", "a", "b", ts(30), "reports_to", std::nullopt},
                        {"r3", "a", "b", ts(50), "reports_to", "lead"},
                        {"r4", "a", "b", ts(50), "reports_to", "tech lead"}};
  HubIndex index(b);
  CHECK_FALSE(index.o2o_valid_at("a", "b", "reports_to", *parse_timestamp(ts(5))));
  CHECK(index.o2o_valid_at("a", "b", "reports_to", *parse_timestamp(ts(10))) == "manager");
  CHECK(index.o2o_valid_at("a", "b", "reports_to", *parse_timestamp(ts(29))) == "manager");
  CHECK_FALSE(index.o2o_valid_at("a", "b", "reports_to", *parse_timestamp(ts(30))));
  CHECK(index.o2o_valid_at("a", "b", "reports_to", *parse_timestamp(ts(60))) == "tech lead");
  CHECK_FALSE(index.o2o_valid_at("b", "a", "reports_to", *parse_timestamp(ts(60))));
  CHECK_THROWS_AS(index.o2o_valid_at("a", "zz", "reports_to", 0), NotFoundError);
  CHECK_THROWS_AS(index.o2o_valid_at("a", "b", "nope", 0), NotFoundError);
}

TEST_CASE("property: o2o_valid_at agrees with a full scan") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    Batch b;
    b.objects = {{"a", "t", std::nullopt}, {"b", "t", std::nullopt}};
    b.relation_qualifiers = {{"q1", "q1", "string"}, {"q2", "q2", "string"}};
    int n = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int i = 0; i < n; ++i) {
      int minute = std::uniform_int_distribution<int>(0, 5)(rng);
      bool terminated = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
      b.object_to_object.push_back({"r" + std::to_string(i), (i % 3) ? "a" : "b", (i % 3) ? "b" : "a", ts(minute),
                                    (i % 2) ? "q1" : "q2", terminated ? Field{} : Field{"v" + std::to_string(i)}});
    }
    HubIndex index(b);
    for (int minute = -1; minute <= 6; ++minute) {
      for (const char* q : {"q1", "q2"}) {
        const ObjectToObject* best = nullptr;
        for (const auto& r : b.object_to_object) {
          if (r.source_object_id != "a" || r.target_object_id != "b" || r.qualifier_id != q) continue;
          if (r.timestamp > ts(minute)) continue;
          if (!best || r.timestamp > best->timestamp || (r.timestamp == best->timestamp && r.id > best->id)) best = &r;
        }
        Field expected = best ? best->qualifier_value : Field{};
        CHECK(index.o2o_valid_at("a", "b", q, *parse_timestamp(ts(minute))) == expected);
      }
    }
  }
}

TEST_CASE("store-level helpers") {
  ochub::testing::TempDir dir;
  auto store = HubStore::open(dir.path(), true);
  store.append(ochub::testing::tiebreak_fixture());
  CHECK(object_timeline(store, "c1").size() == 5);
  CHECK_THROWS_AS(object_timeline(store, "x"), NotFoundError);
  CHECK_THROWS_AS(o2o_valid_at(store, "c1", "c2", "q:on", "later"), FormatError);
  CHECK_FALSE(o2o_valid_at(store, "c1", "c2", "q:on", "2024-03-01 12:00"));
}

TEST_CASE("stats count rows per type, qualifier and attribute") {
  Batch b = ochub::testing::synthetic_process("p", 3, 1);
  auto s = summary_stats(b);
  CHECK(s.events == 12);
  CHECK(s.objects == b.objects.size());
  CHECK(s.events_per_type.at("p:et:create") == 3);
  CHECK(s.event_to_object_attribute_value == 6);
  CHECK(s.table_rows.at("events") == 12);
  CHECK(s.event_to_object_per_type_pair.at({"p:et:approve", "p:ot:order"}) == 3);
  CHECK(s.values_per_object_attribute.at("p:oa:status") == 9);

  auto j = nlohmann::json::parse(s.to_json());
  CHECK(j["events"] == 12);
  CHECK(j["table_rows"]["objects"] == b.objects.size());
  CHECK(s.to_text().find("events") != std::string::npos);

  auto empty = summary_stats(Batch{});
  CHECK(empty.events == 0);
  CHECK(empty.table_rows.size() == 12);
}
