#include "textpm/pipeline.hpp"

#include "textpm/rng.hpp"

namespace textpm {

Checkpoint train_model(const EventLog& train_log, const std::optional<TextModelKind>& text_kind, NetConfig net,
                       std::uint64_t seed, const TextModelOptions& text_options) {
    Checkpoint ckpt;
    ckpt.spec = fit_encoder(train_log, text_kind, mix_seed(seed, 1), text_options);
    net = make_net_config(ckpt.spec, net);
    net.seed = mix_seed(seed, 2);
    ckpt.params = init(net);
    const auto samples = make_training_samples(ckpt.spec, train_log);
    ckpt.history = train(ckpt.params, samples);
    ckpt.data_fingerprint = fingerprint(train_log);
    return ckpt;
}

std::string variant_name(const std::optional<TextModelKind>& text_kind) {
    return text_kind ? "LSTM+" + to_string(*text_kind) : "LSTM";
}

}  // namespace textpm
