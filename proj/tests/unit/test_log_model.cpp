#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "textpm/error.hpp"
#include "textpm/log_model.hpp"
#include "textpm/timestamp.hpp"

using namespace textpm;
using namespace textpm::testing;

TEST_CASE("customer journey snippet groups into five cases") {
    const EventLog log = parse_csv(data_file("customer_journey_snippet.csv"), customer_journey_schema());
    REQUIRE(log.traces.size() == 5);
    CHECK(log.event_count() == 24);
    const Trace& t = log.traces.front();
    CHECK(t.case_id == "40154127");
    REQUIRE(t.events.size() == 5);
    CHECK(t.events.front().activity == "question");
    int with_text = 0;
    for (const auto& e : t.events) with_text += e.textuals.at("Message").empty() ? 0 : 1;
    CHECK(with_text == 1);
    CHECK(t.events.front().textuals.at("Message") == "Can you send me a copy of the decision?");
    CHECK(t.events.front().categoricals.at("Age") == "50-65");
}

TEST_CASE("hospital snippet parses the date-time format without fractions") {
    const EventLog log = parse_csv(data_file("hospital_admission_snippet.csv"), hospital_schema());
    CHECK(log.traces.size() == 10);
    CHECK(log.event_count() == 22);
    CHECK(log.traces.front().events.front().timestamp == *parse_timestamp("2117-11-20T10:22:00Z"));
}

TEST_CASE("header-only file gives an empty log") {
    const EventLog log = parse_csv_text("case,activity,timestamp\n", {});
    CHECK(log.traces.empty());
    CHECK(log.event_count() == 0);
}

TEST_CASE("events are sorted by timestamp within a case, stable on ties") {
    const EventLog log = parse_csv_text(
        "case,activity,timestamp\n"
        "1,C,2020-01-01T00:00:03\n"
        "1,A,2020-01-01T00:00:01\n"
        "1,B,2020-01-01T00:00:02\n"
        "2,X,2020-01-01T00:00:05\n"
        "2,Y,2020-01-01T00:00:05\n",
        {});
    REQUIRE(log.traces.size() == 2);
    CHECK(log.traces[0].events[0].activity == "A");
    CHECK(log.traces[0].events[1].activity == "B");
    CHECK(log.traces[0].events[2].activity == "C");
    CHECK(log.traces[1].events[0].activity == "X");
    CHECK(log.traces[1].events[1].activity == "Y");
}

TEST_CASE("core columns are case-insensitive and may appear in any order") {
    const EventLog log = parse_csv_text("Timestamp,Activity,Case\n2020-01-01,A,k\n", {});
    REQUIRE(log.traces.size() == 1);
    CHECK(log.traces[0].case_id == "k");
    CHECK(log.traces[0].events[0].activity == "A");
}

TEST_CASE("parse errors carry the offending line number") {
    SUBCASE("malformed timestamp") {
        try {
            parse_csv_text("case,activity,timestamp\n1,A,2020-01-01\n1,B,yesterday\n", {});
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("wrong field count") {
        try {
            parse_csv_text("case,activity,timestamp\n1,A\n", {});
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("reserved END label") {
        CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp\n1,[END],2020-01-01\n", {}), ParseError);
    }
    SUBCASE("empty activity") {
        CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp\n1,,2020-01-01\n", {}), ParseError);
    }
    SUBCASE("non-numeric numerical attribute") {
        const Schema s{{"cost", AttributeKind::numerical}};
        CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp,cost\n1,A,2020-01-01,abc\n", s), ParseError);
        CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp,cost\n1,A,2020-01-01,inf\n", s), ParseError);
    }
}

TEST_CASE("schema mismatches are schema errors") {
    CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp,extra\n", {}), SchemaError);
    CHECK_THROWS_AS(parse_csv_text("case,activity,timestamp\n", {{"Message", AttributeKind::textual}}), SchemaError);
    CHECK_THROWS_AS(parse_csv_text("case,activity\n", {}), SchemaError);
    CHECK_THROWS_AS(parse_attribute_kind("colour"), SchemaError);
}

TEST_CASE("quoted fields keep commas, quotes and newlines") {
    const Schema s{{"msg", AttributeKind::textual}};
    const EventLog log =
        parse_csv_text("case,activity,timestamp,msg\n1,A,2020-01-01,\"a, \"\"b\"\"\nc\"\n", s);
    CHECK(log.traces[0].events[0].textuals.at("msg") == "a, \"b\"\nc");
}

TEST_CASE("head returns the first k events") {
    const EventLog log = make_log({{"c", {{"x1", 1}, {"x2", 2}, {"x3", 3}}}});
    const Trace& t = log.traces[0];
    const Trace h2 = head(t, 2);
    REQUIRE(h2.events.size() == 2);
    CHECK(h2.events[0].activity == "x1");
    CHECK(h2.events[1].activity == "x2");
    CHECK(head(t, 0).events.empty());
    CHECK(head(t, 3).events.size() == 3);
    CHECK_THROWS_AS(head(t, 4), BoundsError);
    for (std::size_t j = 0; j <= 3; ++j) {
        for (std::size_t i = 0; i <= j; ++i) CHECK(head(head(t, j), i).events.size() == head(t, i).events.size());
    }
}

TEST_CASE("prefix samples carry the four targets") {
    const EventLog log = make_log({{"c", {{"A", 100}, {"B", 160}, {"C", 400}}}});
    const auto s1 = make_prefix_sample(log.traces[0], 1);
    CHECK(s1.next_activity == "B");
    CHECK(s1.next_delta == 60.0);
    CHECK(s1.outcome == "C");
    CHECK(s1.cycle_time == 300.0);
    const auto s3 = make_prefix_sample(log.traces[0], 3);
    CHECK(s3.next_activity == kEndLabel);
    CHECK(s3.next_delta == 0.0);
    CHECK(s3.cycle_time == 300.0);
    CHECK(s3.prefix().size() == 3);
}

TEST_CASE("prefix log has one sample per event") {
    const EventLog log = make_log({{"a", {{"A", 0}, {"B", 1}, {"C", 2}}}, {"b", {{"A", 0}, {"B", 1}}}});
    CHECK(prefix_log(log).size() == 5);

    Rng rng(11);
    for (int round = 0; round < 100; ++round) {
        const EventLog r = random_log(rng, 1 + rng.below(20), 12);
        const auto samples = prefix_log(r);
        REQUIRE(samples.size() == r.event_count());
        for (const auto& s : samples) {
            CHECK(s.next_delta >= 0.0);
            CHECK(s.cycle_time >= s.prefix().back().timestamp - s.prefix().front().timestamp);
            CHECK(s.outcome == s.trace->events.back().activity);
        }
    }
}

TEST_CASE("chronological split orders by first timestamp then case id") {
    SUBCASE("three traces, two thirds") {
        const EventLog log = make_log({{"t3", {{"A", 3}}}, {"t1", {{"A", 1}}}, {"t2", {{"A", 2}}}});
        const auto [train, test] = chronological_split(log, 2.0 / 3.0);
        REQUIRE(train.traces.size() == 2);
        CHECK(train.traces[0].case_id == "t1");
        CHECK(train.traces[1].case_id == "t2");
        REQUIRE(test.traces.size() == 1);
        CHECK(test.traces[0].case_id == "t3");
    }
    SUBCASE("ties broken by case id") {
        const EventLog log = make_log({{"b", {{"A", 5}}}, {"a", {{"A", 5}}}, {"c", {{"A", 5}}}});
        const auto [train, test] = chronological_split(log, 0.5);
        REQUIRE(train.traces.size() == 2);
        CHECK(train.traces[0].case_id == "a");
        CHECK(train.traces[1].case_id == "b");
        CHECK(test.traces[0].case_id == "c");
    }
    SUBCASE("ceil of the fraction") {
        std::vector<TraceSpec> specs;
        for (int i = 0; i < 15001; ++i) specs.push_back({std::to_string(100000 + i), {{"A", double(i)}}});
        const auto [train, test] = chronological_split(make_log(specs), 2.0 / 3.0);
        CHECK(train.traces.size() == 10001);
        CHECK(test.traces.size() == 5000);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(chronological_split(make_log({{"a", {{"A", 1}}}}), 0.5), SplitError);
        const EventLog two = make_log({{"a", {{"A", 1}}}, {"b", {{"A", 2}}}});
        CHECK_THROWS_AS(chronological_split(two, 0.0), SplitError);
        CHECK_THROWS_AS(chronological_split(two, 1.0), SplitError);
        const auto [train, test] = chronological_split(two, 0.99);
        CHECK(train.traces.size() == 1);
        CHECK(test.traces.size() == 1);
    }
}

TEST_CASE("CSV round trip is exact for millisecond timestamps") {
    const Schema schema{{"kind", AttributeKind::categorical},
                        {"cost", AttributeKind::numerical},
                        {"note", AttributeKind::textual}};
    const std::string text =
        "case,activity,timestamp,kind,cost,note\n"
        "c1,A,2020-02-29T23:59:59.123,x,0.1,\"hello, world\"\n"
        "c1,B,2020-03-01T00:00:00.000,y,-3.25e-7,\n"
        "c2,A,1999-12-31T12:00:00.5,x,42,\"multi\nline\"\n";
    const EventLog log = parse_csv_text(text, schema);
    const EventLog again = parse_csv_text(write_csv_text(log), schema);
    REQUIRE(again.traces.size() == log.traces.size());
    REQUIRE(again.event_count() == log.event_count());
    for (std::size_t t = 0; t < log.traces.size(); ++t) {
        CHECK(again.traces[t].case_id == log.traces[t].case_id);
        for (std::size_t i = 0; i < log.traces[t].events.size(); ++i) {
            const Event& a = log.traces[t].events[i];
            const Event& b = again.traces[t].events[i];
            CHECK(a.activity == b.activity);
            CHECK(a.timestamp == b.timestamp);
            CHECK(a.categoricals == b.categoricals);
            CHECK(a.numericals == b.numericals);
            CHECK(a.textuals == b.textuals);
        }
    }
    CHECK(fingerprint(again) == fingerprint(log));
}

TEST_CASE("validate rejects decreasing timestamps and empty traces") {
    EventLog log = make_log({{"a", {{"A", 2}, {"B", 1}}}});
    CHECK_THROWS_AS(validate(log), SchemaError);
    log.traces[0].events.clear();
    CHECK_THROWS_AS(validate(log), SchemaError);
    CHECK_NOTHROW(validate(make_log({{"a", {{"A", 1}, {"B", 1}}}})));
}

TEST_CASE("log statistics") {
    SUBCASE("customer journey snippet") {
        const LogStats s = log_stats(parse_csv(data_file("customer_journey_snippet.csv"), customer_journey_schema()));
        CHECK(s.cases == 5);
        CHECK(s.events == 24);
        CHECK(s.variants == 5);
        CHECK(s.mean_events_per_case == doctest::Approx(4.8));
        CHECK(s.activities == 7);
        CHECK(s.words_after < s.words_before);
        CHECK(s.vocabulary_after <= s.vocabulary_before);
    }
    SUBCASE("single one-event trace") {
        const LogStats s = log_stats(make_log({{"a", {{"A", 10}}}}));
        CHECK(s.mean_events_per_case == 1.0);
        CHECK(s.mean_duration_days == 0.0);
        CHECK(s.median_duration_days == 0.0);
    }
    SUBCASE("empty log") {
        const LogStats s = log_stats(EventLog{});
        CHECK(s.cases == 0);
        CHECK(s.events == 0);
        CHECK(s.mean_events_per_case == 0.0);
    }
    SUBCASE("durations in days") {
        const LogStats s = log_stats(make_log({{"a", {{"A", 0}, {"B", 86400}}}, {"b", {{"A", 0}, {"B", 3 * 86400}}}}));
        CHECK(s.mean_duration_days == 2.0);
        CHECK(s.median_duration_days == 2.0);
        CHECK(s.variants == 1);
    }
}

TEST_CASE("timestamp formats") {
    CHECK(*parse_timestamp("1970-01-01T00:00:00Z") == 0.0);
    CHECK(*parse_timestamp("2015/12/15 12:24:42.000") == *parse_timestamp("2015-12-15T12:24:42"));
    CHECK(*parse_timestamp("2020-01-01T01:00:00+01:00") == *parse_timestamp("2020-01-01T00:00:00Z"));
    CHECK(*parse_timestamp("2020-01-01") == 1577836800.0);
    CHECK_FALSE(parse_timestamp("2020-02-30").has_value());
    CHECK_FALSE(parse_timestamp("2020-01-01T24:00:00").has_value());
    CHECK_FALSE(parse_timestamp("").has_value());
    CHECK(format_timestamp(1577836800.25) == "2020-01-01T00:00:00.250");
    CHECK(format_timestamp(-1.0) == "1969-12-31T23:59:59.000");
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double t = std::round(rng.uniform(-2e9, 6e9) * 1000.0) / 1000.0;
        CHECK(*parse_timestamp(format_timestamp(t)) == t);
    }
}
