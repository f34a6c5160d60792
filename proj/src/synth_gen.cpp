#include "textpm/synth_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <set>

#include "textpm/error.hpp"
#include "textpm/rng.hpp"
#include "textpm/text_pipeline.hpp"
#include "textpm/timestamp.hpp"

namespace textpm {
namespace {

double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

/// shift + Exp(mean1) + Exp(mean2), all in seconds; zero means are point masses.
struct Delay {
    double shift = 0.0;
    double mean1 = 0.0;
    double mean2 = 0.0;

    double cdf(double x) const {
        const double y = x - shift;
        if (y < 0.0) return 0.0;
        const double a = std::max(mean1, mean2);
        const double b = std::min(mean1, mean2);
        if (a == 0.0) return 1.0;
        if (b == 0.0) return 1.0 - std::exp(-y / a);
        if (std::abs(a - b) <= 1e-12 * a) return 1.0 - std::exp(-y / a) * (1.0 + y / a);
        const double la = 1.0 / a;
        const double lb = 1.0 / b;
        return 1.0 - (lb * std::exp(-la * y) - la * std::exp(-lb * y)) / (lb - la);
    }

    double upper() const { return shift + 60.0 * (mean1 + mean2); }
};

/// Median of a weighted mixture of delays: smallest x with CDF(x) >= 1/2.
double mixture_median(const std::vector<std::pair<double, Delay>>& parts) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& [w, d] : parts) {
        lo = std::min(lo, d.shift);
        hi = std::max(hi, d.upper());
    }
    auto cdf = [&](double x) {
        double s = 0.0;
        for (const auto& [w, d] : parts) s += w * d.cdf(x);
        return s;
    };
    if (cdf(lo) >= 0.5) return lo;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= 0.5 ? hi : lo) = mid;
    }
    return hi;
}

std::string argmax_label(const std::map<std::string, double>& mass) {
    std::string best;
    double best_mass = -1.0;
    for (const auto& [label, m] : mass) {
        if (m > best_mass) {
            best = label;
            best_mass = m;
        }
    }
    return best;
}

double duration_density(double gap_s, double scale, double offset_days, double mean_days) {
    const double y = gap_s / (scale * kSecondsPerDay) - offset_days;
    if (mean_days == 0.0) return std::abs(y) < 1e-6 ? 1.0 : 0.0;
    if (y < -1e-9) return 0.0;
    return std::exp(-std::max(y, 0.0) / mean_days) / mean_days;
}

void check_probabilities(double sum, const char* what) {
    if (std::abs(sum - 1.0) > 1e-9) throw ParamError(std::string(what) + " probabilities must sum to 1");
}

}  // namespace

void SynthSpec::validate() const {
    if (n_cases < 1) throw ParamError("synthetic log needs at least one case");
    if (branches.empty()) throw ParamError("synthetic spec needs at least one branch rule");
    if (priorities.empty()) throw ParamError("synthetic spec needs at least one priority level");
    if (!(text_emission >= 0.0 && text_emission <= 1.0)) throw ParamError("text emission must lie in [0, 1]");
    if (!(mean_interarrival_days >= 0.0)) throw ParamError("inter-arrival mean must be >= 0");
    if (filler_per_message > 0 && filler.empty()) throw ParamError("filler words requested but none given");

    std::set<std::string> seen(filler.begin(), filler.end());
    double sum = 0.0;
    for (const auto& b : branches) {
        if (!(b.probability >= 0.0)) throw ParamError("branch probability must be >= 0");
        sum += b.probability;
        if (b.activity.empty() || b.activity == kEndLabel || b.closing_activity == kEndLabel) {
            throw ParamError("branch '" + b.name + "' has an invalid activity");
        }
        if (keywords_per_message > 0 && b.keywords.empty()) {
            throw ParamError("branch '" + b.name + "' has no keywords");
        }
        if (!(b.offset_days >= 0.0 && b.mean_days >= 0.0 && b.closing_offset_days >= 0.0 &&
              b.closing_mean_days >= 0.0)) {
            throw ParamError("branch '" + b.name + "' has a negative delay parameter");
        }
        for (const auto& k : b.keywords) {
            if (!seen.insert(k).second) throw ParamError("keyword '" + k + "' is not unique to one pool");
        }
    }
    check_probabilities(sum, "branch");
    sum = 0.0;
    for (const auto& p : priorities) {
        if (!(p.probability >= 0.0) || !(p.scale > 0.0)) throw ParamError("invalid priority level '" + p.level + "'");
        sum += p.probability;
    }
    check_probabilities(sum, "priority");
}

Schema SynthSpec::schema() const {
    return {{priority_attribute, AttributeKind::categorical}, {text_attribute, AttributeKind::textual}};
}

SynthSpec default_synth_spec(std::uint64_t seed, std::size_t n_cases) {
    SynthSpec s;
    s.seed = seed;
    s.n_cases = n_cases;
    s.filler = {"hello", "order", "customer", "account", "today", "product", "website", "number"};
    SynthBranch refund;
    refund.name = "refund";
    refund.keywords = {"refund", "money", "reimbursement", "payment", "charge", "invoice"};
    refund.activity = "REFUND";
    refund.offset_days = 0.25;
    refund.mean_days = 0.25;
    SynthBranch complaint;
    complaint.name = "complaint";
    complaint.keywords = {"complaint", "rude", "staff", "delay", "service", "unfriendly"};
    complaint.activity = "COMPLAINT";
    complaint.offset_days = 2.0;
    complaint.mean_days = 1.0;
    s.branches = {refund, complaint};
    s.priorities = {{"high", 0.5, 1.0}, {"low", 0.5, 6.0}};
    return s;
}

EventLog generate(const SynthSpec& spec) {
    spec.validate();
    EventLog log;
    log.schema = spec.schema();
    Rng rng(spec.seed);
    std::vector<double> branch_w, prio_w;
    for (const auto& b : spec.branches) branch_w.push_back(b.probability);
    for (const auto& p : spec.priorities) prio_w.push_back(p.probability);

    const std::size_t width = std::to_string(spec.n_cases).size();
    double clock = spec.start_time;
    for (std::size_t c = 0; c < spec.n_cases; ++c) {
        clock = round_ms(clock + rng.exponential(spec.mean_interarrival_days) * kSecondsPerDay);
        const SynthBranch& branch = spec.branches[rng.categorical(branch_w)];
        const SynthPriority& prio = spec.priorities[rng.categorical(prio_w)];

        std::string message;
        if (rng.uniform() < spec.text_emission) {
            std::vector<std::string> words;
            for (std::size_t i = 0; i < spec.keywords_per_message; ++i) {
                words.push_back(branch.keywords[rng.below(branch.keywords.size())]);
            }
            for (std::size_t i = 0; i < spec.filler_per_message; ++i) {
                words.push_back(spec.filler[rng.below(spec.filler.size())]);
            }
            rng.shuffle(words);
            for (const auto& w : words) message += (message.empty() ? "" : " ") + w;
            if (!message.empty()) message += ".";
        }

        std::string id = std::to_string(c + 1);
        Trace trace{"case_" + std::string(width - id.size(), '0') + id, {}};
        Event first;
        first.activity = spec.start_activity;
        first.timestamp = clock;
        first.categoricals[spec.priority_attribute] = prio.level;
        first.textuals[spec.text_attribute] = message;
        trace.events.push_back(first);

        auto delay = [&](double offset, double mean) {
            return prio.scale * (offset + (mean > 0.0 ? rng.exponential(mean) : 0.0)) * kSecondsPerDay;
        };
        Event second;
        second.activity = branch.activity;
        second.timestamp = round_ms(clock + delay(branch.offset_days, branch.mean_days));
        second.categoricals[spec.priority_attribute] = prio.level;
        second.textuals[spec.text_attribute] = "";
        trace.events.push_back(second);
        if (!branch.closing_activity.empty()) {
            Event third = second;
            third.activity = branch.closing_activity;
            third.timestamp = round_ms(second.timestamp + delay(branch.closing_offset_days, branch.closing_mean_days));
            trace.events.push_back(third);
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

SynthOracle::SynthOracle(SynthSpec spec, bool text_aware) : spec_(std::move(spec)), text_aware_(text_aware) {
    spec_.validate();
}

std::vector<double> SynthOracle::posterior(std::span<const Event> prefix) const {
    if (prefix.empty()) throw LengthError("cannot predict from an empty prefix");
    const Event& first = prefix[0];
    double scale = 1.0;
    if (auto it = first.categoricals.find(spec_.priority_attribute); it != first.categoricals.end()) {
        for (const auto& p : spec_.priorities) {
            if (p.level == it->second) scale = p.scale;
        }
    }

    std::vector<std::string> tokens;
    if (text_aware_) {
        if (auto it = first.textuals.find(spec_.text_attribute); it != first.textuals.end()) {
            tokens = tokenize(to_lower(it->second));
        }
    }
    const std::set<std::string> filler(spec_.filler.begin(), spec_.filler.end());

    std::vector<double> w;
    for (const auto& b : spec_.branches) {
        double p = b.probability;
        for (const auto& tok : tokens) {
            if (filler.contains(tok)) continue;
            const bool hit = std::find(b.keywords.begin(), b.keywords.end(), tok) != b.keywords.end();
            p *= hit ? 1.0 / static_cast<double>(b.keywords.size()) : 0.0;
        }
        if (prefix.size() >= 2) {
            p *= prefix[1].activity == b.activity ? 1.0 : 0.0;
            p *= duration_density(prefix[1].timestamp - prefix[0].timestamp, scale, b.offset_days, b.mean_days);
        }
        if (prefix.size() >= 3) {
            p *= prefix[2].activity == b.closing_activity ? 1.0 : 0.0;
            p *= duration_density(prefix[2].timestamp - prefix[1].timestamp, scale, b.closing_offset_days,
                                  b.closing_mean_days);
        }
        if (prefix.size() >= 4) p = 0.0;
        w.push_back(p);
    }
    double sum = 0.0;
    for (double x : w) sum += x;
    if (!(sum > 0.0)) {
        w.clear();
        for (const auto& b : spec_.branches) w.push_back(b.probability);
        sum = 1.0;
    }
    for (double& x : w) x /= sum;
    return w;
}

PointPrediction SynthOracle::predict(std::span<const Event> prefix) const {
    const auto post = posterior(prefix);
    const std::size_t k = prefix.size();
    double scale = 1.0;
    if (auto it = prefix[0].categoricals.find(spec_.priority_attribute); it != prefix[0].categoricals.end()) {
        for (const auto& p : spec_.priorities) {
            if (p.level == it->second) scale = p.scale;
        }
    }
    const double unit = scale * kSecondsPerDay;

    std::map<std::string, double> next_mass, outcome_mass;
    std::vector<std::pair<double, Delay>> next_delay, remaining;
    for (std::size_t i = 0; i < spec_.branches.size(); ++i) {
        if (post[i] <= 0.0) continue;
        const SynthBranch& b = spec_.branches[i];
        const bool closes = !b.closing_activity.empty();
        const Delay first{unit * b.offset_days, unit * b.mean_days, 0.0};
        const Delay second{unit * b.closing_offset_days, unit * b.closing_mean_days, 0.0};
        std::string next = std::string(kEndLabel);
        Delay nd{}, rem{};
        if (k == 1) {
            next = b.activity;
            nd = first;
            rem = closes ? Delay{first.shift + second.shift, first.mean1, second.mean1} : first;
        } else if (k == 2 && closes) {
            next = b.closing_activity;
            nd = second;
            rem = second;
        }
        next_mass[next] += post[i];
        outcome_mass[b.outcome()] += post[i];
        next_delay.emplace_back(post[i], nd);
        remaining.emplace_back(post[i], rem);
    }
    PointPrediction out;
    out.next_activity = argmax_label(next_mass);
    out.outcome = argmax_label(outcome_mass);
    out.next_delta = mixture_median(next_delay);
    out.cycle_time = (prefix.back().timestamp - prefix.front().timestamp) + mixture_median(remaining);
    return out;
}

std::vector<PointPrediction> SynthOracle::predict(std::span<const PrefixSample> samples) const {
    std::vector<PointPrediction> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(predict(s.prefix()));
    return out;
}

SynthOutput generate_with_oracles(const SynthSpec& spec) {
    return {generate(spec), SynthOracle(spec, true), SynthOracle(spec, false)};
}

double expected_branch_accuracy(const SynthSpec& spec, bool text_aware) {
    spec.validate();
    std::map<std::string, double> mass;
    for (const auto& b : spec.branches) mass[b.activity] += b.probability;
    double blind = 0.0;
    for (const auto& [label, m] : mass) blind = std::max(blind, m);
    if (!text_aware || spec.keywords_per_message == 0) return blind;
    // Keyword pools are disjoint, so any emitted message identifies its rule.
    return spec.text_emission + (1.0 - spec.text_emission) * blind;
}

}  // namespace textpm
