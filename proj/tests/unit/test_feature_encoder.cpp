#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "textpm/error.hpp"
#include "textpm/feature_encoder.hpp"
#include "textpm/timestamp.hpp"

using namespace textpm;
using namespace textpm::testing;

namespace {

const TextModelKind kBow50{TextModelFamily::bow, 50, 1};

double ts(const char* text) { return *parse_timestamp(text); }

EncoderSpec roundtrip(const EncoderSpec& spec) {
    BinaryWriter w;
    write_encoder_spec(w, spec);
    BinaryReader r(w.bytes());
    return read_encoder_spec(r);
}

}  // namespace

TEST_CASE("feature dimension is the sum of block sizes") {
    SUBCASE("one activity, no attributes") {
        const EncoderSpec spec = fit_encoder(make_log({{"a", {{"A", 0}}}}), std::nullopt, 1);
        CHECK(spec.activities == std::vector<std::string>{"A", std::string(kEndLabel)});
        CHECK(spec.total_dim == 8);
        CHECK(encode_trace(spec, make_log({{"b", {{"A", 5}}}}).traces[0]).cols() == 8);
    }
    SUBCASE("customer journey layout: 18 activities, two categoricals, BoW-50") {
        const Schema schema{{"gender", AttributeKind::categorical},
                            {"age", AttributeKind::categorical},
                            {"message", AttributeKind::textual}};
        EventLog log;
        log.schema = schema;
        const char* genders[] = {"F", "M"};
        const char* ages[] = {"18-25", "25-35", "35-50", "50-65", "65+"};
        for (int c = 0; c < 18; ++c) {
            Trace t{"c" + std::to_string(c), {}};
            Event e;
            e.activity = "act" + std::to_string(c);
            e.timestamp = 1e9 + 3600.0 * c;
            e.categoricals = {{"gender", genders[c % 2]}, {"age", ages[c % 5]}};
            e.textuals = {{"message", c % 3 == 0 ? "refund request for payment" : ""}};
            t.events.push_back(e);
            log.traces.push_back(t);
        }
        const EncoderSpec spec = fit_encoder(log, kBow50, 1);
        CHECK(spec.total_dim == 19 + 6 + 2 + 5 + 50);
        CHECK(spec.total_dim == 82);
        const EncoderSpec blind = fit_encoder(log, std::nullopt, 1);
        CHECK(blind.total_dim == 32);
        CHECK(blind.text_models.empty());
    }
    SUBCASE("empty log") {
        CHECK_THROWS_AS(fit_encoder(EventLog{}, std::nullopt, 1), FitError);
    }
}

TEST_CASE("time features") {
    SUBCASE("first event of the log") {
        const double t0 = ts("2020-03-04T05:06:07");
        const auto f = time_features(t0, t0, t0, t0);
        CHECK(f[0] == 0.0);
        CHECK(f[1] == 0.0);
        CHECK(f[2] == 0.0);
    }
    SUBCASE("calendar features from a known Monday") {
        // 2020-01-06 is a Monday; count forward from it independently.
        const double monday = 1578268800.0;
        CHECK(seconds_since_monday(monday) == 0.0);
        const double tuesday_1am = monday + 86400.0 + 3600.0;
        CHECK(ts("2020-01-07T01:00:00") == tuesday_1am);
        const auto f = time_features(tuesday_1am, tuesday_1am, tuesday_1am, tuesday_1am);
        CHECK(f[3] == 3600.0);
        CHECK(f[4] == 90000.0);
        CHECK(f[5] == (6.0 * 86400.0 + 3600.0));
    }
    SUBCASE("new year") {
        CHECK(seconds_since_new_year(ts("2021-01-01T00:00:00")) == 0.0);
        CHECK(seconds_since_new_year(ts("2020-12-31T23:59:59")) == 365.0 * 86400.0 + 86399.0);
        CHECK(seconds_since_midnight(ts("1969-12-31T23:00:00")) == 82800.0);
        CHECK(seconds_since_monday(ts("1970-01-01T00:00:00")) == 3.0 * 86400.0);
    }
    SUBCASE("trace context") {
        const EventLog log = make_log({{"a", {{"A", 1000}, {"B", 1600}, {"C", 1700}}}});
        const auto f = time_features(std::span<const Event>(log.traces[0].events), 2, 400);
        CHECK(f[0] == 100.0);
        CHECK(f[1] == 700.0);
        CHECK(f[2] == 1300.0);
        const auto g = time_features(std::span<const Event>(log.traces[0].events), 0, 400);
        CHECK(g[0] == 0.0);
        CHECK(g[1] == 0.0);
    }
    SUBCASE("ranges") {
        Rng rng(3);
        for (int i = 0; i < 2000; ++i) {
            const double t = rng.uniform(-3e9, 5e9);
            const auto f = time_features(t, t, t, t);
            CHECK(f[3] >= 0.0);
            CHECK(f[3] < 86400.0);
            CHECK(f[4] >= 0.0);
            CHECK(f[4] < 604800.0);
            CHECK(f[5] >= 0.0);
            CHECK(f[5] < 366.0 * 86400.0);
        }
    }
}

TEST_CASE("minmax normalization") {
    CHECK(minmax(10, {10, 20}) == 0.0);
    CHECK(minmax(20, {10, 20}) == 1.0);
    CHECK(minmax(15, {10, 20}) == 0.5);
    CHECK(minmax(5, {5, 5}) == 0.0);
    CHECK(minmax(30, {10, 20}) == 2.0);
    CHECK(unminmax(0.5, {0, 200}) == 100.0);
    CHECK(unminmax(0.0, {3, 9}) == 3.0);
    CHECK(unminmax(1.0, {3, 9}) == 9.0);
    CHECK(unminmax(0.7, {4, 4}) == 4.0);
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const double lo = rng.uniform(-1e6, 1e6), hi = lo + rng.uniform(1e-3, 1e7);
        const double x = rng.uniform(lo, hi);
        CHECK(std::abs(unminmax(minmax(x, {lo, hi}), {lo, hi}) - x) <= 1e-9 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("hospital admission row") {
    const EventLog log = parse_csv(data_file("hospital_admission_snippet.csv"), hospital_schema());
    const EncoderSpec spec = fit_encoder(log, TextModelKind{TextModelFamily::bow, 10, 1}, 1);
    REQUIRE(log.traces[0].case_id == "8");
    const Trace& t = log.traces[0];
    const Eigen::VectorXd x = encode_event(spec, t.events, 0);
    REQUIRE(static_cast<std::size_t>(x.size()) == spec.total_dim);

    const auto na = static_cast<Eigen::Index>(spec.activity_count());
    CHECK(x.head(na).sum() == 1.0);
    CHECK(x(static_cast<Eigen::Index>(spec.activity_index("PHYS REFERRAL/NORMAL DELI"))) == 1.0);
    CHECK(x(static_cast<Eigen::Index>(spec.activity_index(kEndLabel))) == 0.0);

    const auto& adm = spec.categorical_levels.at("admission_type");
    const auto& ins = spec.categorical_levels.at("insurance");
    CHECK(adm == std::vector<std::string>{"ELECTIVE", "EMERGENCY", "NEWBORN"});
    CHECK(ins == std::vector<std::string>{"Medicaid", "Medicare", "Private"});
    const Eigen::Index adm_at = na + 6;
    const Eigen::Index ins_at = adm_at + 3;
    CHECK(x.segment(adm_at, 3) == Eigen::Vector3d(0, 0, 1));
    CHECK(x.segment(ins_at, 3) == Eigen::Vector3d(0, 0, 1));
    CHECK(spec.total_dim == static_cast<std::size_t>(na + 6 + 3 + 3 + 10));

    // The admission of case 8 is not the first event of the log, so t3 > 0.
    CHECK(x(na + 2) > 0.0);
    CHECK(x(na) == 0.0);
    CHECK(x(na + 1) == 0.0);

    // The follow-up event has an empty diagnosis: BoW block is all zeros.
    const Eigen::VectorXd y = encode_event(spec, t.events, 1);
    CHECK(y.tail(10).isZero());
    CHECK(x.tail(10).sum() > 0.0);
}

TEST_CASE("training data normalizes into the unit interval") {
    const EventLog log = parse_csv(data_file("customer_journey_snippet.csv"), customer_journey_schema());
    const EncoderSpec spec = fit_encoder(log, std::nullopt, 1);
    for (const auto& t : log.traces) {
        const Eigen::MatrixXd m = encode_trace(spec, t);
        REQUIRE(m.rows() == static_cast<Eigen::Index>(t.events.size()));
        CHECK(m.minCoeff() >= 0.0);
        CHECK(m.maxCoeff() <= 1.0);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            CHECK(m.row(i) == encode_event(spec, t.events, static_cast<std::size_t>(i)).transpose());
            CHECK(m.row(i).head(static_cast<Eigen::Index>(spec.activity_count())).sum() == 1.0);
        }
    }
}

TEST_CASE("LDA text block of an empty message is uniform") {
    const EventLog log = parse_csv(data_file("customer_journey_snippet.csv"), customer_journey_schema());
    TextModelOptions opt;
    opt.lda.burn_in = 30;
    const EncoderSpec spec = fit_encoder(log, TextModelKind{TextModelFamily::lda, 4, 1}, 1, opt);
    const Trace& t = log.traces[0];
    REQUIRE(t.events[1].textuals.at("Message").empty());
    const Eigen::VectorXd x = encode_event(spec, t.events, 1);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(x(x.size() - 4 + i) == doctest::Approx(0.25));
}

TEST_CASE("unseen values at prediction time") {
    const Schema schema{{"kind", AttributeKind::categorical}, {"cost", AttributeKind::numerical}};
    EventLog train = make_log({{"a", {{"A", 0}, {"B", 10}}}}, schema);
    train.traces[0].events[0].categoricals["kind"] = "x";
    train.traces[0].events[1].categoricals["kind"] = "y";
    train.traces[0].events[0].numericals["cost"] = 5;
    train.traces[0].events[1].numericals["cost"] = 5;
    const EncoderSpec spec = fit_encoder(train, std::nullopt, 1);
    CHECK(spec.total_dim == 3 + 6 + 2 + 1);

    EventLog test = train;
    test.traces[0].events[0].categoricals["kind"] = "z";
    const Eigen::VectorXd x = encode_event(spec, test.traces[0].events, 0);
    CHECK(x.segment(9, 2).isZero());
    CHECK(x(11) == 0.0);  // constant numeric attribute

    test.traces[0].events[0].activity = "Q";
    CHECK_THROWS_AS(encode_event(spec, test.traces[0].events, 0), EncodingError);
    CHECK_THROWS_AS(spec.activity_index("Q"), EncodingError);
    CHECK_THROWS_AS(spec.outcome_index(kEndLabel), EncodingError);

    test = train;
    test.traces[0].events[0].numericals.clear();
    CHECK_THROWS_AS(encode_event(spec, test.traces[0].events, 0), EncodingError);
}

TEST_CASE("targets") {
    const EventLog log = make_log({{"a", {{"A", 0}, {"B", 100}}}, {"b", {{"A", 0}, {"B", 200}}}});
    const EncoderSpec spec = fit_encoder(log, std::nullopt, 1);
    CHECK(spec.next_delta_bounds == Bounds{0, 200});
    const auto y = encode_targets(spec, make_prefix_sample(log.traces[0], 1));
    CHECK(y.next_activity == spec.activity_index("B"));
    CHECK(y.next_delta == 0.5);
    CHECK(y.outcome == spec.outcome_index("B"));
    const auto end = encode_targets(spec, make_prefix_sample(log.traces[0], 2));
    CHECK(end.next_activity == spec.activity_index(kEndLabel));
    CHECK(end.next_activity == spec.activity_count() - 1);
    CHECK(end.next_delta == 0.0);
    CHECK(denormalize_time(spec, 0.5, TimeTarget::next_delta) == 100.0);
    CHECK(denormalize_time(spec, 0.0, TimeTarget::next_delta) == 0.0);
    CHECK(denormalize_time(spec, 1.0, TimeTarget::next_delta) == 200.0);
    CHECK(denormalize_time(spec, 1.0, TimeTarget::cycle) == spec.cycle_bounds.max);

    const EventLog single = make_log({{"s", {{"A", 7}}}, {"t", {{"A", 0}, {"B", 50}}}});
    const EncoderSpec s2 = fit_encoder(single, std::nullopt, 1);
    const auto y1 = encode_targets(s2, make_prefix_sample(single.traces[0], 1));
    CHECK(y1.outcome == s2.outcome_index("A"));
    CHECK(y1.cycle == 0.0);
}

TEST_CASE("encoder spec persists exactly") {
    const EventLog log = parse_csv(data_file("customer_journey_snippet.csv"), customer_journey_schema());
    for (const auto& kind : std::vector<std::optional<TextModelKind>>{std::nullopt, kBow50,
                                                                      TextModelKind{TextModelFamily::pv, 5, 1}}) {
        const EncoderSpec spec = fit_encoder(log, kind, 3);
        const EncoderSpec back = roundtrip(spec);
        CHECK(back.total_dim == spec.total_dim);
        CHECK(back.text_kind == spec.text_kind);
        CHECK(back.activities == spec.activities);
        CHECK(back.time_bounds == spec.time_bounds);
        for (const auto& t : log.traces) CHECK(encode_trace(back, t) == encode_trace(spec, t));
    }
    const EventLog no_text = make_log({{"a", {{"A", 0}, {"B", 1}}}});
    const EncoderSpec aware = fit_encoder(no_text, kBow50, 1);
    CHECK(roundtrip(aware).text_aware());
}
