#include "textpm/predictors.hpp"

#include <map>

#include "textpm/error.hpp"

namespace textpm {

NetPredictor::NetPredictor(std::string name, std::shared_ptr<const Checkpoint> checkpoint)
    : name_(std::move(name)), checkpoint_(std::move(checkpoint)) {
    if (!checkpoint_) throw ParamError("network predictor needs a checkpoint");
}

std::vector<PointPrediction> NetPredictor::predict(std::span<const PrefixSample> samples) const {
    const EncoderSpec& spec = checkpoint_->spec;
    std::map<const Trace*, Eigen::MatrixXd> encoded;
    std::vector<SequenceRef> refs;
    refs.reserve(samples.size());
    for (const auto& s : samples) {
        auto it = encoded.find(s.trace);
        if (it == encoded.end()) {
            Eigen::MatrixXd m(static_cast<Eigen::Index>(s.trace->events.size()),
                              static_cast<Eigen::Index>(spec.total_dim));
            for (std::size_t i = 0; i < s.trace->events.size(); ++i) {
                try {
                    m.row(static_cast<Eigen::Index>(i)) = encode_event(spec, s.trace->events, i).transpose();
                } catch (const EncodingError& e) {
                    throw EncodingError(name_ + ": case '" + s.trace->case_id + "', k=" + std::to_string(i + 1) +
                                        ": " + e.what());
                }
            }
            it = encoded.emplace(s.trace, std::move(m)).first;
        }
        refs.push_back({&it->second, s.k});
    }
    const auto preds = forward(checkpoint_->params, refs);
    std::vector<PointPrediction> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Trace partial = head(*samples[i].trace, samples[i].k);
        const CasePrediction cp = decode_prediction(spec, preds[i], partial);
        out.push_back({cp.next_activity, cp.next_delta_seconds, cp.outcome, cp.cycle_seconds});
    }
    return out;
}

TransitionSystemPredictor::TransitionSystemPredictor(TransitionSystem ts, std::string name)
    : ts_(std::move(ts)), name_(name.empty() ? "TS-" + std::string(to_string(ts_.abstraction())) : std::move(name)) {}

std::vector<PointPrediction> TransitionSystemPredictor::predict(std::span<const PrefixSample> samples) const {
    std::vector<PointPrediction> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(ts_.predict(s.prefix()));
    return out;
}

}  // namespace textpm
