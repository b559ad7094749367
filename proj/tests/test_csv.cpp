#include <doctest.h>

#include "ochub/csv.hpp"
#include "ochub/errors.hpp"
#include "support/support.hpp"

using namespace ochub;

TEST_CASE("csv reader handles quoting, CRLF and BOM") {
  auto t = csv::parse("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\n\"multi\nline\",\n");
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"x,1", "say \"hi\""});
  CHECK(t.rows[1] == std::vector<std::string>{"multi\nline", ""});
  CHECK(t.lines == std::vector<std::size_t>{2, 4});
  CHECK(t.column("b") == 1);
  CHECK(t.column("zz") == std::string::npos);
}

TEST_CASE("csv reader rejects ragged rows and open quotes") {
  CHECK_THROWS_AS(csv::parse("a,b\n1\n"), FormatError);
  CHECK_THROWS_AS(csv::parse("a\n\"open\n"), FormatError);
}

TEST_CASE("csv writer round-trips through the reader") {
  ochub::testing::TempDir dir;
  std::vector<std::vector<std::string>> rows = {{"id", "text"}, {"1", "plain"}, {"2", "a,b"}, {"3", "q\"uote"},
                                                {"4", "new\nline"}, {"5", ""}};
  {
    csv::Writer w(dir / "x.csv");
    for (const auto& r : rows) w.row(r);
    w.close();
  }
  auto t = csv::read(dir / "x.csv");
  CHECK(t.header == rows[0]);
  REQUIRE(t.rows.size() == rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(t.rows[i - 1] == rows[i]);
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a\"b") == "\"a\"\"b\"");
}
