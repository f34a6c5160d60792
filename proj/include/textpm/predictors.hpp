#pragma once

#include <memory>
#include <string>

#include "textpm/metrics.hpp"
#include "textpm/recurrent_net.hpp"
#include "textpm/ts_baseline.hpp"

namespace textpm {

/// Trained network plus encoder behind the PrefixPredictor interface.
class NetPredictor final : public PrefixPredictor {
public:
    NetPredictor(std::string name, std::shared_ptr<const Checkpoint> checkpoint);

    std::string name() const override { return name_; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override;

private:
    std::string name_;
    std::shared_ptr<const Checkpoint> checkpoint_;
};

class TransitionSystemPredictor final : public PrefixPredictor {
public:
    explicit TransitionSystemPredictor(TransitionSystem ts, std::string name = {});

    std::string name() const override { return name_; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override;
    const TransitionSystem& system() const { return ts_; }

private:
    TransitionSystem ts_;
    std::string name_;
};

}  // namespace textpm
