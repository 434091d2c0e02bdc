#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "sentiforge/common.hpp"
#include "sentiforge/csv.hpp"
#include "sentiforge/time.hpp"

using namespace sentiforge;

TEST_CASE("civil date round trips") {
    CHECK(utc::days_from_civil(1970, 1, 1) == 0);
    CHECK(utc::days_from_civil(2018, 1, 1) == 17532);
    const auto c = utc::civil_from_days(17532);
    CHECK(c.year == 2018);
    CHECK(c.month == 1);
    CHECK(c.day == 1);
    for (std::int64_t d : {-1000, 0, 17532, 18219, 20000}) {
        const auto cd = utc::civil_from_days(d);
        CHECK(utc::days_from_civil(cd.year, cd.month, cd.day) == d);
    }
}

TEST_CASE("timestamp parsing and formatting") {
    const std::int64_t t = utc::parse_timestamp("2018-01-01T00:00:00Z");
    CHECK(t == 1514764800);
    CHECK(utc::parse_timestamp("2018-01-01 00:00:00") == t);
    CHECK(utc::parse_timestamp("2018-01-01") == t);
    CHECK(utc::format_timestamp(t) == "2018-01-01T00:00:00Z");
    CHECK(utc::format_day(utc::parse_day("2019-11-20")) == "2019-11-20");
    CHECK(utc::parse_timestamp("2018-01-01T00:10:48Z") == t + 648);

    CHECK_THROWS_AS(utc::parse_timestamp("2018-13-01T00:00:00Z"), DataError);
    CHECK_THROWS_AS(utc::parse_timestamp("garbage"), DataError);
    CHECK_THROWS_AS(utc::parse_day("2018/01/01"), DataError);
}

TEST_CASE("leap days parse and format") {
    const std::int64_t leap = utc::parse_day("2020-02-29");
    CHECK(utc::format_day(leap) == "2020-02-29");
    CHECK(utc::parse_day("2020-03-01") - leap == 1);
    CHECK(utc::parse_day("2019-03-01") - utc::parse_day("2019-02-28") == 1);
}

TEST_CASE("hour helpers") {
    const std::int64_t t = utc::parse_timestamp("2018-01-01T05:42:11Z");
    CHECK_FALSE(utc::is_hour_aligned(t));
    CHECK(utc::floor_hour(t) == utc::parse_timestamp("2018-01-01T05:00:00Z"));
    CHECK(utc::is_hour_aligned(utc::floor_hour(t)));
    CHECK(utc::day_of(t) == utc::parse_day("2018-01-01"));
}

TEST_CASE("csv quoting and parsing") {
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape_field("line\nbreak") == "\"line\nbreak\"");

    const csv::Table t = csv::parse(
        "h1,h2\n"
        "\"quoted, comma\",plain\r\n"
        "\"embedded\nnewline\",\"doubled \"\"quote\"\"\"\n");
    CHECK(t.header == csv::Row{"h1", "h2"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "quoted, comma");
    CHECK(t.rows[1][0] == "embedded\nnewline");
    CHECK(t.rows[1][1] == "doubled \"quote\"");

    CHECK_THROWS_AS(csv::parse("h\n\"unterminated"), DataError);
}

TEST_CASE("csv write/parse round trip") {
    csv::Table t;
    t.header = {"a", "b"};
    t.rows = {{"1,2", "x\"y"}, {"", "line\nfeed"}, {"plain", ""}};
    std::ostringstream out;
    csv::write_row(out, t.header);
    for (const auto& row : t.rows) csv::write_row(out, row);
    const csv::Table back = csv::parse(out.str());
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
}

TEST_CASE("number formatting is shortest round trip") {
    CHECK(csv::format_double(13820.26) == "13820.26");
    CHECK(csv::format_double(0.0426) == "0.0426");
    CHECK(csv::format_double(-0.9971) == "-0.9971");
    CHECK(csv::format_double(0.0) == "0");
    for (double v : {1.0 / 3.0, 625.29, 1e-17, -123456.789}) {
        CHECK(csv::parse_double(csv::format_double(v)) == v);
    }
    CHECK_THROWS_AS(csv::parse_double("12x"), DataError);
    CHECK_THROWS_AS(csv::parse_int("1.5"), DataError);
}

TEST_CASE("header validation names the offending column") {
    try {
        csv::require_header({"timestamp", "open", "high"},
                            {"timestamp", "open", "high", "low"}, "f.csv");
        FAIL("expected throw");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("low") != std::string::npos);
    }
}
