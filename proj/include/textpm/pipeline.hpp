#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "textpm/predictors.hpp"
#include "textpm/recurrent_net.hpp"
#include "textpm/ts_baseline.hpp"

namespace textpm {

/// Fits the encoder on `train_log`, then initializes and trains a network.
/// Shape fields of `net` are overwritten from the encoder; its seed is replaced by `seed`.
Checkpoint train_model(const EventLog& train_log, const std::optional<TextModelKind>& text_kind, NetConfig net,
                       std::uint64_t seed, const TextModelOptions& text_options = {});

/// Display name of a network variant, e.g. "LSTM+bow-50" or "LSTM".
std::string variant_name(const std::optional<TextModelKind>& text_kind);

}  // namespace textpm
