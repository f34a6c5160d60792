#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textpm/recurrent_net.hpp"
#include "textpm/synth_gen.hpp"
#include "textpm/text_models.hpp"
#include "textpm/ts_baseline.hpp"

namespace textpm {

/// Everything a command needs, resolved from an INI file plus flag overrides.
struct RunConfig {
    std::optional<std::uint64_t> seed;
    std::string log_path;
    std::string out_dir;
    std::string model_dir;  // checkpoints; defaults to out_dir
    Schema schema;
    std::string text_model = "bow";  // bow | bong | pv | lda | none
    std::size_t vector_size = 50;
    std::size_t ngram = 2;
    TextModelOptions text_options;
    NetConfig net;
    std::vector<Abstraction> abstractions{Abstraction::sequence, Abstraction::bag, Abstraction::set};
    std::size_t horizon = 8;
    double train_fraction = 2.0 / 3.0;
    bool evaluate_text_blind = true;
    std::size_t synth_cases = 1000;
    double synth_text_emission = 1.0;

    /// nullopt for "none".
    std::optional<TextModelKind> text_kind() const;
    /// Throws ConfigError unless a seed was given.
    std::uint64_t require_seed() const;
};

/// Parses INI text (top-level `seed`, sections paths, schema, text, network,
/// baselines, evaluate, split, synth). Unknown keys are errors.
RunConfig parse_run_config(std::string_view ini_text);
RunConfig load_run_config(const std::string& path);
/// Fully-resolved configuration in the same format.
std::string to_ini(const RunConfig& config);

void cmd_stats(const RunConfig& config, std::ostream& out);
void cmd_synth(const RunConfig& config, std::ostream& out);
void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_evaluate(const RunConfig& config, std::ostream& out);
void cmd_predict(const std::string& checkpoint_path, const std::string& input_path, std::ostream& out);

/// Entry point behind the textpm executable; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace textpm
