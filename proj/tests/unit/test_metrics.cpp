#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "test_support.hpp"
#include "textpm/error.hpp"
#include "textpm/metrics.hpp"
#include "textpm/predictors.hpp"
#include "textpm/ts_baseline.hpp"

using namespace textpm;
using namespace textpm::testing;

namespace {

using Labels = std::vector<std::string>;

/// Predicts the true targets.
class Perfect final : public PrefixPredictor {
public:
    std::string name() const override { return "perfect"; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override {
        std::vector<PointPrediction> out;
        for (const auto& s : samples) out.push_back({s.next_activity, s.next_delta, s.outcome, s.cycle_time});
        return out;
    }
};

/// Predicts one fixed answer everywhere.
class Constant final : public PrefixPredictor {
public:
    explicit Constant(PointPrediction p) : p_(std::move(p)) {}
    std::string name() const override { return "constant"; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override {
        return std::vector<PointPrediction>(samples.size(), p_);
    }

private:
    PointPrediction p_;
};

/// Predicts the most frequent next activity seen after the same prefix length.
class PerLengthMajority final : public PrefixPredictor {
public:
    explicit PerLengthMajority(const EventLog& train) {
        std::map<std::size_t, std::map<std::string, std::size_t>> counts;
        for (const auto& s : prefix_log(train)) ++counts[s.k][s.next_activity];
        for (const auto& [k, c] : counts) {
            std::string best;
            std::size_t n = 0;
            for (const auto& [label, m] : c) {
                if (m > n) best = label, n = m;
            }
            modal_[k] = best;
        }
    }
    std::string name() const override { return "majority"; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override {
        std::vector<PointPrediction> out;
        for (const auto& s : samples) out.push_back({modal_.at(s.k), 0.0, "", 0.0});
        return out;
    }

private:
    std::map<std::size_t, std::string> modal_;
};

EventLog sixty_forty() {
    std::vector<TraceSpec> specs;
    for (int i = 0; i < 10; ++i) {
        const double t0 = 1e9 + 86400.0 * i;
        specs.push_back({"c" + std::to_string(i), {{"A", t0}, {i < 6 ? "B" : "C", t0 + 3600.0}}});
    }
    return make_log(specs);
}

}  // namespace

TEST_CASE("weighted F1") {
    CHECK(weighted_f1(Labels{"A", "B", "C"}, Labels{"A", "B", "C"}) == 1.0);
    CHECK(weighted_f1(Labels{"A", "B", "B", "B"}, Labels{"A", "A", "B", "B"}) ==
          doctest::Approx(0.5 * 2.0 / 3.0 + 0.5 * 0.8).epsilon(1e-15));
    CHECK(weighted_f1(Labels{"A", "B", "B", "B"}, Labels{"A", "A", "B", "B"}) == doctest::Approx(0.7333).epsilon(1e-4));
    CHECK(weighted_f1(Labels{"A", "A", "A", "A"}, Labels{"A", "A", "B", "B"}) == doctest::Approx(1.0 / 3.0));
    // A predicted class absent from the truths only costs precision.
    CHECK(weighted_f1(Labels{"Z", "A"}, Labels{"A", "A"}) == doctest::Approx(2.0 / 3.0));
    CHECK(weighted_f1(Labels{"B", "A"}, Labels{"A", "B"}) == 0.0);
    CHECK_THROWS_AS(weighted_f1(Labels{"A"}, Labels{"A", "B"}), LengthError);
    CHECK_THROWS_AS(weighted_f1(Labels{}, Labels{}), LengthError);
}

TEST_CASE("weighted F1 ignores label names") {
    Rng rng(2);
    const Labels names{"A", "B", "C", "D"}, renamed{"w", "z", "x", "y"};
    for (int round = 0; round < 200; ++round) {
        Labels p, t, p2, t2;
        const std::size_t n = 1 + rng.below(30);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rng.below(4), b = rng.below(4);
            p.push_back(names[a]);
            t.push_back(names[b]);
            p2.push_back(renamed[a]);
            t2.push_back(renamed[b]);
        }
        CHECK(weighted_f1(p, t) == doctest::Approx(weighted_f1(p2, t2)).epsilon(1e-14));
        const double f = weighted_f1(p, t);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("mean absolute error in days") {
    const std::vector<double> same{1.0, 2.0, 3.0};
    CHECK(mae_days(same, same) == 0.0);
    CHECK(mae_days(std::vector<double>{86400, 259200}, std::vector<double>{172800, 86400}) == 1.5);
    CHECK(mae_days(std::vector<double>{43200}, std::vector<double>{0}) == 0.5);
    CHECK_THROWS_AS(mae_days(std::vector<double>{1}, std::vector<double>{}), LengthError);
    CHECK_THROWS_AS(mae_days(std::vector<double>{}, std::vector<double>{}), LengthError);

    Rng rng(3);
    for (int round = 0; round < 200; ++round) {
        std::vector<double> p, t, p2, t2;
        const double c = rng.uniform(-1e6, 1e6);
        for (std::size_t i = 0, n = 1 + rng.below(20); i < n; ++i) {
            p.push_back(std::round(rng.uniform(0, 1e6)));
            t.push_back(std::round(rng.uniform(0, 1e6)));
            p2.push_back(p.back() + c);
            t2.push_back(t.back() + c);
        }
        CHECK(mae_days(p, t) == doctest::Approx(mae_days(p2, t2)).epsilon(1e-9));
    }
}

TEST_CASE("perfect predictor scores perfectly") {
    Rng rng(4);
    const EventLog log = random_log(rng, 40, 12);
    const ModelReport r = evaluate(Perfect{}, log);
    CHECK(r.overall.count == log.event_count());
    CHECK(r.overall.next_activity_f1 == 1.0);
    CHECK(r.overall.outcome_f1 == 1.0);
    CHECK(r.overall.next_timestamp_mae == 0.0);
    CHECK(r.overall.cycle_time_mae == 0.0);
    for (const auto& b : r.by_length) {
        if (b.count > 0) CHECK(b.next_activity_f1 == 1.0);
    }
}

TEST_CASE("prefix-length buckets") {
    SUBCASE("one sample per length") {
        const ModelReport r = evaluate(Perfect{}, make_log({{"a", {{"A", 0}, {"B", 1}, {"C", 2}}}}));
        CHECK(r.by_length[0].count == 1);
        CHECK(r.by_length[1].count == 1);
        CHECK(r.by_length[2].count == 1);
        CHECK(r.by_length[3].count == 0);
        CHECK(std::isnan(r.by_length[3].next_activity_f1));
        CHECK(std::isnan(r.by_length[3].cycle_time_mae));
        CHECK(r.longer.count == 0);
    }
    SUBCASE("overall MAE is the count-weighted mean of the buckets") {
        Rng rng(5);
        const EventLog train = random_log(rng, 60, 14);
        const EventLog test = random_log(rng, 30, 14);
        const TransitionSystemPredictor ts(TransitionSystem::build(train, Abstraction::bag));
        const ModelReport r = evaluate(ts, test);
        double weighted = 0.0, cycle = 0.0;
        std::size_t n = 0;
        auto add = [&](const TaskScores& s) {
            if (s.count == 0) return;
            weighted += s.next_timestamp_mae * static_cast<double>(s.count);
            cycle += s.cycle_time_mae * static_cast<double>(s.count);
            n += s.count;
        };
        for (const auto& b : r.by_length) add(b);
        add(r.longer);
        CHECK(r.longer.count > 0);
        CHECK(n == r.overall.count);
        CHECK(weighted / static_cast<double>(n) == doctest::Approx(r.overall.next_timestamp_mae).epsilon(1e-12));
        CHECK(cycle / static_cast<double>(n) == doctest::Approx(r.overall.cycle_time_mae).epsilon(1e-12));
    }
}

TEST_CASE("majority dummy and transition system agree on the 60/40 log") {
    const EventLog log = sixty_forty();
    const ModelReport ts = evaluate(TransitionSystemPredictor(TransitionSystem::build(log, Abstraction::sequence)), log);
    const ModelReport dummy = evaluate(PerLengthMajority(log), log);
    // k=1: both predict B for six B and four C truths; k=2: both predict END.
    CHECK(ts.by_length[0].next_activity_f1 == doctest::Approx(0.6 * 0.75));
    CHECK(dummy.by_length[0].next_activity_f1 == ts.by_length[0].next_activity_f1);
    CHECK(dummy.overall.next_activity_f1 == ts.overall.next_activity_f1);
    CHECK(ts.overall.next_activity_f1 == doctest::Approx(0.3 * 0.75 + 0.5 * 1.0));

    const ModelReport all_b = evaluate(Constant({"B", 0, "B", 0}), log);
    CHECK(all_b.overall.next_activity_f1 == doctest::Approx(0.3 * (2 * 0.3 / 1.3)));
}

TEST_CASE("reports") {
    const EventLog log = sixty_forty();
    const Perfect perfect;
    const Constant constant({"B", 0, "B", 0});
    const PrefixPredictor* models[] = {&perfect, &constant};
    const EvalReport r = evaluate(models, log);
    REQUIRE(r.models.size() == 2);
    CHECK(r.models[0].model == "perfect");

    const std::string csv = report_csv(r);
    CHECK(csv.rfind("model,task,k,count,score\n", 0) == 0);
    CHECK(csv.find("perfect,next_activity_f1,overall,20,1\n") != std::string::npos);
    CHECK(csv.find("perfect,next_activity_f1,1,10,1\n") != std::string::npos);
    CHECK(csv.find("perfect,next_activity_f1,3,0,\n") != std::string::npos);
    CHECK(csv.find("constant,cycle_time_mae_days,>8,0,\n") != std::string::npos);
    // 2 models x 4 tasks x (overall + 8 + >8) rows plus the header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 4 * 10);

    const std::string table = report_table(r);
    CHECK(table.find("perfect") != std::string::npos);
    CHECK(table.find("constant") != std::string::npos);

    const EvalReport again = evaluate(models, log);
    CHECK(report_csv(again) == csv);
}
