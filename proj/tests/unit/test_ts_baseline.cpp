#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "test_support.hpp"
#include "textpm/error.hpp"
#include "textpm/metrics.hpp"
#include "textpm/predictors.hpp"
#include "textpm/ts_baseline.hpp"

using namespace textpm;
using namespace textpm::testing;

namespace {

constexpr Abstraction kAll[] = {Abstraction::sequence, Abstraction::bag, Abstraction::set};

std::vector<std::string> acts(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

/// Two variants in given proportions, one hour between events.
EventLog mixed_log(std::size_t ab, std::size_t ac) {
    std::vector<TraceSpec> specs;
    for (std::size_t i = 0; i < ab + ac; ++i) {
        const double t0 = 1e9 + 86400.0 * static_cast<double>(i);
        specs.push_back({"c" + std::to_string(i), {{"A", t0}, {i < ab ? "B" : "C", t0 + 3600.0}}});
    }
    return make_log(specs);
}

Trace prefix_of(std::initializer_list<const char*> xs) {
    std::vector<std::pair<std::string, double>> events;
    double t = 0;
    for (const char* x : xs) events.emplace_back(x, t++);
    return make_log({{"p", events}}).traces[0];
}

PointPrediction predict(const TransitionSystem& ts, std::initializer_list<const char*> xs) {
    const Trace t = prefix_of(xs);
    return ts.predict(t.events);
}

}  // namespace

TEST_CASE("state abstractions") {
    const auto aba = acts({"A", "B", "A"});
    CHECK(abstract_state(std::span<const std::string>(aba), Abstraction::sequence) == acts({"A", "B", "A"}));
    CHECK(abstract_state(std::span<const std::string>(aba), Abstraction::bag) == acts({"A", "A", "B"}));
    CHECK(abstract_state(std::span<const std::string>(aba), Abstraction::set) == acts({"A", "B"}));
    CHECK(format_state(acts({"A", "B", "A"}), Abstraction::sequence) == "(A,B,A)");
    CHECK(format_state(acts({"A", "A", "B"}), Abstraction::bag) == "{A:2,B:1}");
    CHECK(format_state(acts({"A", "B"}), Abstraction::set) == "{A,B}");

    const auto a = acts({"A"});
    for (auto abs : kAll) CHECK(abstract_state(std::span<const std::string>(a), abs) == a);

    const auto ten = acts({"X", "Y", "A", "B", "C", "D", "E", "F", "G", "H"});
    CHECK(abstract_state(std::span<const std::string>(ten), Abstraction::sequence) ==
          acts({"A", "B", "C", "D", "E", "F", "G", "H"}));
    CHECK(abstract_state(std::span<const std::string>(ten), Abstraction::set, 3) == acts({"F", "G", "H"}));

    CHECK(parse_abstraction("bag") == Abstraction::bag);
    CHECK(to_string(Abstraction::set) == "set");
    CHECK_THROWS_AS(parse_abstraction("tree"), ParamError);
}

TEST_CASE("annotation of a deterministic log") {
    const EventLog log = repeated_log({"A", "B", "C"}, 10);
    const auto ts = TransitionSystem::build(log, Abstraction::sequence);
    const Annotation& a = ts.states().at(acts({"A"}));
    CHECK(a.next_activity_counts == std::map<std::string, std::size_t>{{"B", 10}});
    CHECK(a.visits() == 10);
    const PointPrediction p = predict(ts, {"A"});
    CHECK(p.next_activity == "B");
    CHECK(p.outcome == "C");
    CHECK(p.cycle_time == 7200.0);
    CHECK(p.next_delta == 3600.0);
    CHECK(predict(ts, {"A", "B", "C"}).next_activity == kEndLabel);
    CHECK(predict(ts, {"A", "B", "C"}).next_delta == 0.0);
}

TEST_CASE("counts and modal prediction") {
    const EventLog log = mixed_log(6, 4);
    const auto ts = TransitionSystem::build(log, Abstraction::sequence);
    CHECK(ts.states().at(acts({"A"})).next_activity_counts == std::map<std::string, std::size_t>{{"B", 6}, {"C", 4}});
    CHECK(predict(ts, {"A"}).next_activity == "B");
    CHECK(predict(ts, {"A"}).outcome == "B");

    const auto tie = TransitionSystem::build(mixed_log(5, 5), Abstraction::sequence);
    CHECK(predict(tie, {"A"}).next_activity == "B");
}

TEST_CASE("bag merges orderings that sequence keeps apart") {
    const EventLog log = make_log({{"1", {{"A", 0}, {"B", 1}, {"D", 2}}}, {"2", {{"B", 0}, {"A", 1}, {"D", 2}}}});
    const auto seq = TransitionSystem::build(log, Abstraction::sequence);
    const auto bag = TransitionSystem::build(log, Abstraction::bag);
    CHECK(seq.states().contains(acts({"A", "B"})));
    CHECK(seq.states().contains(acts({"B", "A"})));
    CHECK(bag.states().at(acts({"A", "B"})).visits() == 2);
    CHECK(bag.states().size() < seq.states().size());
}

TEST_CASE("fallback chain") {
    // Training: <A,B,C> x3 and <B,E> x1.
    std::vector<TraceSpec> specs;
    for (int i = 0; i < 3; ++i) specs.push_back({"x" + std::to_string(i), {{"A", 0}, {"B", 60}, {"C", 180}}});
    specs.push_back({"y", {{"B", 0}, {"E", 600}}});
    const EventLog log = make_log(specs);
    const auto ts = TransitionSystem::build(log, Abstraction::sequence);

    SUBCASE("unseen order hits the set key of the same window") {
        // (B,A) never occurs, {A,B} does via (A,B).
        const PointPrediction p = predict(ts, {"B", "A"});
        const PointPrediction expected = ts.states().at(acts({"A", "B"})).summary();
        CHECK(p.next_activity == expected.next_activity);
        CHECK(p.next_activity == "C");
        CHECK(p.next_delta == expected.next_delta);
    }
    SUBCASE("unseen window falls back to the last activity") {
        // (E,A,C) and {A,C,E} are unseen; window 2 (A,C) is unseen; window 1 (C) exists.
        const PointPrediction p = predict(ts, {"E", "A", "C"});
        CHECK(p.next_activity == kEndLabel);
        CHECK(p.outcome == "C");
        CHECK(p.next_delta == 0.0);
    }
    SUBCASE("unknown activity falls back to the whole log") {
        const PointPrediction p = predict(ts, {"Z"});
        const PointPrediction g = ts.global().summary();
        CHECK(p.next_activity == g.next_activity);
        CHECK(p.outcome == g.outcome);
        CHECK(p.next_delta == g.next_delta);
        CHECK(p.cycle_time == g.cycle_time);
        // 11 prefixes: END 4 times, B 3, C 3, E 1; outcome C 9 times, E 2.
        CHECK(g.next_activity == kEndLabel);
        CHECK(g.outcome == "C");
        CHECK(g.next_delta == doctest::Approx((3 * (60.0 + 120.0) + 600.0) / 11.0));
        CHECK(g.cycle_time == doctest::Approx((9 * 180.0 + 2 * 600.0) / 11.0));
    }
    SUBCASE("horizon one has no shorter windows") {
        const auto h1 = TransitionSystem::build(log, Abstraction::sequence, 1);
        CHECK(h1.states().size() == 4);
        CHECK(predict(h1, {"Z"}).next_activity == kEndLabel);
        CHECK(predict(h1, {"Q", "A"}).next_activity == "B");
    }
}

TEST_CASE("invariants on random logs") {
    Rng rng(13);
    for (int round = 0; round < 50; ++round) {
        const EventLog log = random_log(rng, 1 + rng.below(30), 12);
        std::size_t counts[3] = {};
        for (int i = 0; i < 3; ++i) {
            const auto ts = TransitionSystem::build(log, kAll[i]);
            const std::size_t total =
                std::accumulate(ts.states().begin(), ts.states().end(), std::size_t{0},
                                [](std::size_t s, const auto& kv) { return s + kv.second.visits(); });
            CHECK(total == log.event_count());
            CHECK(ts.global().visits() == log.event_count());
            counts[i] = ts.states().size();
            const Trace& t = log.traces[rng.below(log.traces.size())];
            const auto a = ts.predict(t.events);
            const auto b = ts.predict(t.events);
            CHECK(a.next_activity == b.next_activity);
            CHECK(a.cycle_time == b.cycle_time);
        }
        CHECK(counts[2] <= counts[1]);
        CHECK(counts[1] <= counts[0]);
    }
}

TEST_CASE("deterministic log is predicted perfectly by every abstraction") {
    const EventLog log = repeated_log({"A", "B", "C", "D", "E"}, 20);
    for (auto abs : kAll) {
        CAPTURE(to_string(abs));
        const TransitionSystemPredictor p(TransitionSystem::build(log, abs));
        const ModelReport r = evaluate(p, log);
        CHECK(r.overall.next_activity_f1 == 1.0);
        CHECK(r.overall.outcome_f1 == 1.0);
        CHECK(r.overall.next_timestamp_mae == 0.0);
        CHECK(r.overall.cycle_time_mae == 0.0);
    }
}

TEST_CASE("set abstraction cannot see repetitions") {
    const EventLog log = repeated_log({"A", "B", "C", "B", "D"}, 20);
    const TransitionSystemPredictor set(TransitionSystem::build(log, Abstraction::set));
    const TransitionSystemPredictor bag(TransitionSystem::build(log, Abstraction::bag));
    CHECK(evaluate(set, log).overall.next_activity_f1 < 1.0);
    CHECK(evaluate(bag, log).overall.next_activity_f1 == 1.0);
}

TEST_CASE("state dump") {
    const auto ts = TransitionSystem::build(mixed_log(6, 4), Abstraction::bag);
    const std::string csv = ts.dump_csv();
    CHECK(csv.rfind("state,visits,", 0) == 0);
    CHECK(csv.find("{A:1},10,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(ts.states().size()));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(TransitionSystem::build(EventLog{}, Abstraction::set), FitError);
    CHECK_THROWS_AS(TransitionSystem::build(mixed_log(1, 1), Abstraction::set, 0), ParamError);
    const auto ts = TransitionSystem::build(mixed_log(1, 1), Abstraction::set);
    CHECK_THROWS_AS(ts.predict(std::span<const Event>()), LengthError);
}
