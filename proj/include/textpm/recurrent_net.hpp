#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "textpm/feature_encoder.hpp"

namespace textpm {

enum class Task : std::size_t { next_activity = 0, next_delta = 1, outcome = 2, cycle = 3 };
inline constexpr std::size_t kTaskCount = 4;
std::string_view to_string(Task task);

struct NetConfig {
    std::size_t input_dim = 0;
    std::size_t activity_classes = 0;  // |A| + 1 (END)
    std::size_t outcome_classes = 0;   // |A|
    std::size_t hidden_units = 100;
    std::size_t shared_layers = 1;
    std::size_t head_hidden = 32;
    double learning_rate = 1e-3;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    /// Fraction of the dataset tail held out for early stopping; 0 disables it.
    double validation_fraction = 0.1;
    std::size_t patience = 10;
    std::uint64_t seed = 0;
    std::array<double, kTaskCount> loss_weights{1.0, 1.0, 1.0, 1.0};

    /// Throws ParamError on zero sizes, negative rates or all-zero loss weights.
    void validate() const;
    bool operator==(const NetConfig&) const = default;
};

/// Network shape derived from a fitted encoder, other fields from `base`.
NetConfig make_net_config(const EncoderSpec& spec, NetConfig base = {});

/// All weights in one flat vector, addressed through named tensor slots.
///
/// Per shared layer l: input weights W (4H x in), recurrent weights U (4H x H)
/// and bias b (4H), gate rows ordered input, forget, cell, output. Per head:
/// hidden weights (hh x H), hidden bias, output weights (C x hh), output bias,
/// heads ordered as Task.
class NetParams {
public:
    struct Slot {
        std::string name;
        Eigen::Index rows;
        Eigen::Index cols;
        Eigen::Index offset;
    };

    NetParams() = default;
    /// All-zero parameters with the layout implied by `config`.
    explicit NetParams(const NetConfig& config);

    const NetConfig& config() const { return config_; }
    Eigen::VectorXd& values() { return values_; }
    const Eigen::VectorXd& values() const { return values_; }
    const std::vector<Slot>& slots() const { return slots_; }

    Eigen::Map<Eigen::MatrixXd> tensor(std::size_t slot);
    Eigen::Map<const Eigen::MatrixXd> tensor(std::size_t slot) const;

    static std::size_t lstm_slot(std::size_t layer, std::size_t part) { return 3 * layer + part; }
    std::size_t head_slot(Task task, std::size_t part) const {
        return 3 * config_.shared_layers + 4 * static_cast<std::size_t>(task) + part;
    }

private:
    NetConfig config_;
    std::vector<Slot> slots_;
    Eigen::VectorXd values_;
};

/// Seeded initialization: Glorot-uniform input and dense weights, orthogonal
/// recurrent blocks, forget-gate bias 1, other biases 0.
NetParams init(const NetConfig& config);

struct Prediction {
    Eigen::VectorXd next_activity;  // distribution over activities incl. END
    double next_delta = 0.0;        // normalized
    Eigen::VectorXd outcome;        // distribution over activities
    double cycle = 0.0;             // normalized
};

/// A prefix of an encoded trace: the first k rows of `events`.
struct SequenceRef {
    const Eigen::MatrixXd* events = nullptr;
    std::size_t k = 0;
};

Prediction forward(const NetParams& params, const Eigen::MatrixXd& inputs);
/// Predictions in input order; sequences are grouped by length internally.
std::vector<Prediction> forward(const NetParams& params, std::span<const SequenceRef> batch);

struct LossBreakdown {
    double total = 0.0;
    std::array<double, kTaskCount> task{};  // unweighted per-task losses
};

/// w_a CE_a + w_t AE_t + w_o CE_o + w_c AE_c, log arguments floored at 1e-12.
LossBreakdown loss(const Prediction& pred, const EncodedTargets& target, const std::array<double, kTaskCount>& weights);

struct TrainingSample {
    std::shared_ptr<const Eigen::MatrixXd> events;  // encoded full trace
    std::size_t k = 0;
    EncodedTargets targets;
    std::size_t group = 0;  // trace number; the validation cut never splits a group
};

struct Gradient {
    LossBreakdown mean_loss;
    Eigen::VectorXd values;  // same layout as NetParams::values()
};

/// Exact gradient of the mean loss over `batch` (any mix of prefix lengths).
Gradient backward(const NetParams& params, std::span<const TrainingSample> batch);

/// Mean loss without gradients.
LossBreakdown mean_loss(const NetParams& params, std::span<const TrainingSample> samples);

struct EpochRecord {
    std::size_t epoch = 0;
    LossBreakdown train;
    LossBreakdown validation;  // NaN totals when no validation split
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;  // epoch whose parameters were kept
    bool early_stopped = false;
};

/// Mini-batch Adam over length-bucketed batches. With a validation tail the
/// parameters of the best validation epoch are restored at the end.
TrainingHistory train(NetParams& params, std::span<const TrainingSample> data);

std::string history_csv(const TrainingHistory& history);

/// Training samples for every prefix of every trace, in log order.
std::vector<TrainingSample> make_training_samples(const EncoderSpec& spec, const EventLog& log);

struct CasePrediction {
    std::string next_activity;
    double next_activity_probability = 0.0;
    double next_delta_seconds = 0.0;
    double next_timestamp = 0.0;
    std::string outcome;
    double outcome_probability = 0.0;
    double cycle_seconds = 0.0;
    double completion_time = 0.0;
};

/// Decodes a raw network output; negative durations are clamped to 0.
CasePrediction decode_prediction(const EncoderSpec& spec, const Prediction& pred, const Trace& partial);

CasePrediction predict(const NetParams& params, const EncoderSpec& spec, const Trace& partial);

/// Versioned container with the network, its encoder, training history and
/// a fingerprint of the data it was trained on.
struct Checkpoint {
    NetParams params;
    EncoderSpec spec;
    TrainingHistory history;
    std::uint64_t data_fingerprint = 0;
};

inline constexpr std::string_view kCheckpointMagic = "TPMCHKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(std::string_view bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace textpm
