#include "textpm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "textpm/error.hpp"
#include "textpm/metrics.hpp"
#include "textpm/pipeline.hpp"
#include "textpm/predictors.hpp"
#include "textpm/timestamp.hpp"

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace textpm {
namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            const auto b = cur.find_first_not_of(" \t");
            if (b != std::string::npos) items.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    return items;
}

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("[" + section + "] " + key + ": cannot parse '" + text + "'");
    }
    return value;
}

std::size_t parse_size(const std::string& section, const std::string& key, const std::string& text) {
    if (text.empty() || text[0] == '-') throw ConfigError("[" + section + "] " + key + ": expected a non-negative integer");
    return parse_value<std::size_t>(section, key, text);
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("[" + section + "] " + key + ": expected true or false");
}

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string variant_slug(const std::optional<TextModelKind>& kind) {
    return kind ? "lstm-" + to_string(*kind) : "lstm";
}

void ensure_dir(const std::string& dir) {
    if (dir.empty()) throw ConfigError("an output directory is required (--out)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

EventLog load_log(const RunConfig& config) {
    if (config.log_path.empty()) throw ConfigError("no event log given (--log or [paths] log)");
    return parse_csv(config.log_path, config.schema);
}

std::vector<std::optional<TextModelKind>> network_variants(const RunConfig& config) {
    std::vector<std::optional<TextModelKind>> variants;
    if (auto k = config.text_kind()) variants.emplace_back(k);
    if (!config.text_kind() || config.evaluate_text_blind) variants.emplace_back(std::nullopt);
    return variants;
}

Checkpoint train_and_save(const EventLog& train_log, const std::optional<TextModelKind>& kind,
                          const RunConfig& config, const std::string& dir, std::ostream& out) {
    Checkpoint ckpt = train_model(train_log, kind, config.net, config.require_seed(), config.text_options);
    const std::string slug = variant_slug(kind);
    save_checkpoint(ckpt, join_path(dir, slug + ".ckpt"));
    write_file(join_path(dir, slug + "-history.csv"), history_csv(ckpt.history));
    out << "trained " << variant_name(kind) << ": " << ckpt.history.epochs.size() << " epochs, kept epoch "
        << ckpt.history.best_epoch << " -> " << join_path(dir, slug + ".ckpt") << '\n';
    return ckpt;
}

}  // namespace

std::optional<TextModelKind> RunConfig::text_kind() const {
    if (text_model == "none") return std::nullopt;
    return make_text_model_kind(text_model, vector_size, ngram);
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) throw ConfigError("a seed is required (config key 'seed' or --seed)");
    return *seed;
}

RunConfig parse_run_config(std::string_view ini_text) {
    pt::ptree tree;
    std::istringstream in{std::string(ini_text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig c;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            const std::string v = node.data();
            if (name == "seed") {
                c.seed = parse_value<std::uint64_t>("", name, v);
            } else {
                throw ConfigError("unknown top-level key '" + name + "'");
            }
            continue;
        }
        for (const auto& [key, leaf] : node) {
            const std::string v = leaf.data();
            auto unknown = [&] { throw ConfigError("unknown key '" + key + "' in [" + name + "]"); };
            if (name == "paths") {
                if (key == "log") c.log_path = v;
                else if (key == "out") c.out_dir = v;
                else if (key == "model_dir") c.model_dir = v;
                else unknown();
            } else if (name == "schema") {
                try {
                    c.schema.push_back({key, parse_attribute_kind(v)});
                } catch (const Error& e) {
                    throw ConfigError("[schema] " + key + ": " + e.what());
                }
            } else if (name == "text") {
                if (key == "model") c.text_model = v;
                else if (key == "vector_size") c.vector_size = parse_size(name, key, v);
                else if (key == "ngram") c.ngram = parse_size(name, key, v);
                else if (key == "pv_window") c.text_options.pv.window = parse_size(name, key, v);
                else if (key == "pv_epochs") c.text_options.pv.epochs = parse_size(name, key, v);
                else if (key == "pv_learning_rate") c.text_options.pv.learning_rate = parse_value<double>(name, key, v);
                else if (key == "lda_alpha") c.text_options.lda.alpha = parse_value<double>(name, key, v);
                else if (key == "lda_beta") c.text_options.lda.beta = parse_value<double>(name, key, v);
                else if (key == "lda_burn_in") c.text_options.lda.burn_in = parse_size(name, key, v);
                else if (key == "lda_inference_iterations") c.text_options.lda.inference_iterations = parse_size(name, key, v);
                else unknown();
            } else if (name == "network") {
                NetConfig& n = c.net;
                if (key == "hidden_units") n.hidden_units = parse_size(name, key, v);
                else if (key == "shared_layers") n.shared_layers = parse_size(name, key, v);
                else if (key == "head_hidden") n.head_hidden = parse_size(name, key, v);
                else if (key == "learning_rate") n.learning_rate = parse_value<double>(name, key, v);
                else if (key == "epochs") n.epochs = parse_size(name, key, v);
                else if (key == "batch_size") n.batch_size = parse_size(name, key, v);
                else if (key == "validation_fraction") n.validation_fraction = parse_value<double>(name, key, v);
                else if (key == "patience") n.patience = parse_size(name, key, v);
                else if (key == "loss_weights") {
                    const auto parts = split_list(v);
                    if (parts.size() != kTaskCount) throw ConfigError("[network] loss_weights needs four values");
                    for (std::size_t i = 0; i < kTaskCount; ++i) n.loss_weights[i] = parse_value<double>(name, key, parts[i]);
                } else unknown();
            } else if (name == "baselines") {
                if (key == "abstractions") {
                    c.abstractions.clear();
                    for (const auto& a : split_list(v)) c.abstractions.push_back(parse_abstraction(a));
                } else if (key == "horizon") c.horizon = parse_size(name, key, v);
                else unknown();
            } else if (name == "evaluate") {
                if (key == "text_blind") c.evaluate_text_blind = parse_bool(name, key, v);
                else unknown();
            } else if (name == "split") {
                if (key == "train_fraction") c.train_fraction = parse_value<double>(name, key, v);
                else unknown();
            } else if (name == "synth") {
                if (key == "n_cases") c.synth_cases = parse_size(name, key, v);
                else if (key == "text_emission") c.synth_text_emission = parse_value<double>(name, key, v);
                else unknown();
            } else {
                throw ConfigError("unknown section [" + name + "]");
            }
        }
    }
    return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }

std::string to_ini(const RunConfig& c) {
    std::ostringstream o;
    if (c.seed) o << "seed = " << *c.seed << "\n";
    o << "\n[paths]\nlog = " << c.log_path << "\nout = " << c.out_dir << "\nmodel_dir = "
      << (c.model_dir.empty() ? c.out_dir : c.model_dir) << "\n";
    o << "\n[schema]\n";
    for (const auto& d : c.schema) o << d.name << " = " << to_string(d.kind) << "\n";
    const auto& pv = c.text_options.pv;
    const auto& lda = c.text_options.lda;
    o << "\n[text]\nmodel = " << c.text_model << "\nvector_size = " << c.vector_size << "\nngram = " << c.ngram
      << "\npv_window = " << pv.window << "\npv_epochs = " << pv.epochs
      << "\npv_learning_rate = " << fmt_double(pv.learning_rate) << "\nlda_alpha = " << fmt_double(lda.alpha)
      << "\nlda_beta = " << fmt_double(lda.beta) << "\nlda_burn_in = " << lda.burn_in
      << "\nlda_inference_iterations = " << lda.inference_iterations << "\n";
    const auto& n = c.net;
    o << "\n[network]\nhidden_units = " << n.hidden_units << "\nshared_layers = " << n.shared_layers
      << "\nhead_hidden = " << n.head_hidden << "\nlearning_rate = " << fmt_double(n.learning_rate)
      << "\nepochs = " << n.epochs << "\nbatch_size = " << n.batch_size
      << "\nvalidation_fraction = " << fmt_double(n.validation_fraction) << "\npatience = " << n.patience
      << "\nloss_weights = ";
    for (std::size_t i = 0; i < kTaskCount; ++i) o << (i ? "," : "") << fmt_double(n.loss_weights[i]);
    o << "\n\n[baselines]\nabstractions = ";
    for (std::size_t i = 0; i < c.abstractions.size(); ++i) o << (i ? "," : "") << to_string(c.abstractions[i]);
    o << "\nhorizon = " << c.horizon << "\n";
    o << "\n[evaluate]\ntext_blind = " << (c.evaluate_text_blind ? "true" : "false") << "\n";
    o << "\n[split]\ntrain_fraction = " << fmt_double(c.train_fraction) << "\n";
    o << "\n[synth]\nn_cases = " << c.synth_cases << "\ntext_emission = " << fmt_double(c.synth_text_emission)
      << "\n";
    return o.str();
}

// Commands ----------------------------------------------------------------

void cmd_stats(const RunConfig& config, std::ostream& out) {
    const EventLog log = load_log(config);
    const LogStats s = log_stats(log);
    const std::vector<std::pair<std::string, std::string>> rows{
        {"cases", std::to_string(s.cases)},
        {"variants", std::to_string(s.variants)},
        {"events", std::to_string(s.events)},
        {"events_per_case", fmt_double(s.mean_events_per_case)},
        {"median_case_duration_days", fmt_double(s.median_duration_days)},
        {"mean_case_duration_days", fmt_double(s.mean_duration_days)},
        {"activities", std::to_string(s.activities)},
        {"words_before_preprocessing", std::to_string(s.words_before)},
        {"words_after_preprocessing", std::to_string(s.words_after)},
        {"vocabulary_before_preprocessing", std::to_string(s.vocabulary_before)},
        {"vocabulary_after_preprocessing", std::to_string(s.vocabulary_after)},
    };
    std::string csv = "statistic,value\n";
    for (const auto& [k, v] : rows) {
        out << k << ": " << v << '\n';
        csv += k + "," + v + "\n";
    }
    if (!config.out_dir.empty()) {
        ensure_dir(config.out_dir);
        write_file(join_path(config.out_dir, "stats.csv"), csv);
        write_file(join_path(config.out_dir, "resolved_config.ini"), to_ini(config));
    }
}

void cmd_synth(const RunConfig& config, std::ostream& out) {
    SynthSpec spec = default_synth_spec(config.require_seed(), config.synth_cases);
    spec.text_emission = config.synth_text_emission;
    ensure_dir(config.out_dir);
    const std::string path = join_path(config.out_dir, "synth_log.csv");
    write_csv(generate(spec), path);
    RunConfig resolved = config;
    resolved.log_path = path;
    resolved.schema = spec.schema();
    write_file(join_path(config.out_dir, "resolved_config.ini"), to_ini(resolved));
    out << "wrote " << spec.n_cases << " cases to " << path << '\n';
}

void cmd_train(const RunConfig& config, std::ostream& out) {
    config.require_seed();
    const EventLog log = load_log(config);
    const auto [train_log, test_log] = chronological_split(log, config.train_fraction);
    const std::string dir = config.model_dir.empty() ? config.out_dir : config.model_dir;
    ensure_dir(dir);
    ensure_dir(config.out_dir);
    train_and_save(train_log, config.text_kind(), config, dir, out);
    write_file(join_path(config.out_dir, "resolved_config.ini"), to_ini(config));
}

void cmd_evaluate(const RunConfig& config, std::ostream& out) {
    config.require_seed();
    const EventLog log = load_log(config);
    const auto [train_log, test_log] = chronological_split(log, config.train_fraction);
    const std::string dir = config.model_dir.empty() ? config.out_dir : config.model_dir;
    ensure_dir(config.out_dir);
    ensure_dir(dir);
    const std::uint64_t data_fp = fingerprint(train_log);

    std::vector<std::unique_ptr<PrefixPredictor>> models;
    for (const auto& kind : network_variants(config)) {
        const std::string path = join_path(dir, variant_slug(kind) + ".ckpt");
        std::shared_ptr<const Checkpoint> ckpt;
        if (fs::exists(path)) {
            auto loaded = std::make_shared<Checkpoint>(load_checkpoint(path));
            if (loaded->data_fingerprint != data_fp) {
                throw ConfigError("checkpoint '" + path + "' was trained on different data");
            }
            if (loaded->spec.text_kind != kind) {
                throw ConfigError("checkpoint '" + path + "' uses a different text model");
            }
            out << "loaded " << path << '\n';
            ckpt = std::move(loaded);
        } else {
            ckpt = std::make_shared<Checkpoint>(train_and_save(train_log, kind, config, dir, out));
        }
        models.push_back(std::make_unique<NetPredictor>(variant_name(kind), ckpt));
    }
    for (Abstraction a : config.abstractions) {
        auto ts = TransitionSystem::build(train_log, a, config.horizon);
        write_file(join_path(config.out_dir, "ts-" + std::string(to_string(a)) + ".csv"), ts.dump_csv());
        models.push_back(std::make_unique<TransitionSystemPredictor>(std::move(ts)));
    }

    std::vector<const PrefixPredictor*> view;
    for (const auto& m : models) view.push_back(m.get());
    const EvalReport report = evaluate(view, test_log);
    write_file(join_path(config.out_dir, "report.csv"), report_csv(report));
    const std::string table = report_table(report);
    write_file(join_path(config.out_dir, "report.txt"), table);
    write_file(join_path(config.out_dir, "resolved_config.ini"), to_ini(config));
    out << table;
}

void cmd_predict(const std::string& checkpoint_path, const std::string& input_path, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const EventLog cases = parse_csv(input_path, ckpt.spec.schema);
    if (cases.traces.empty()) throw ConfigError("input file contains no events");
    char buf[64];
    for (const auto& trace : cases.traces) {
        const CasePrediction p = predict(ckpt.params, ckpt.spec, trace);
        out << "case " << trace.case_id << " (" << trace.events.size() << " events)\n";
        std::snprintf(buf, sizeof buf, "%.4f", p.next_activity_probability);
        out << "  next activity:  " << p.next_activity << " (p=" << buf << ")\n";
        std::snprintf(buf, sizeof buf, "%.4f", p.next_delta_seconds / kSecondsPerDay);
        out << "  next timestamp: " << format_timestamp(p.next_timestamp) << " (+" << buf << " days)\n";
        std::snprintf(buf, sizeof buf, "%.4f", p.outcome_probability);
        out << "  outcome:        " << p.outcome << " (p=" << buf << ")\n";
        std::snprintf(buf, sizeof buf, "%.4f", p.cycle_seconds / kSecondsPerDay);
        out << "  completion:     " << format_timestamp(p.completion_time) << " (cycle time " << buf << " days)\n";
    }
}

// Command line ------------------------------------------------------------

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Text-aware predictive process monitoring"};
    app.require_subcommand(1);

    struct Flags {
        std::string config, log, out, text_model, checkpoint, input;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> vector_size;
        std::vector<std::string> abstractions, attributes;
    } f;

    auto common = [&](CLI::App* sub, bool with_model_flags) {
        sub->add_option("--config", f.config, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--log", f.log, "event log CSV (case,activity,timestamp,attributes...)");
        sub->add_option("--out", f.out, "output directory");
        sub->add_option("--seed", f.seed, "random seed");
        sub->add_option("--attribute", f.attributes, "attribute declaration NAME=KIND (categorical|numerical|textual)");
        if (with_model_flags) {
            sub->add_option("--text-model", f.text_model, "text model")
                ->check(CLI::IsMember({"bow", "bong", "pv", "lda", "none"}));
            sub->add_option("--vector-size", f.vector_size, "text vector size")->check(CLI::PositiveNumber);
            sub->add_option("--abstraction", f.abstractions, "transition-system abstraction(s)")
                ->check(CLI::IsMember({"sequence", "bag", "set"}));
        }
    };
    auto* stats = app.add_subcommand("stats", "summarize an event log");
    common(stats, false);
    auto* synth = app.add_subcommand("synth", "generate the synthetic text-determined log");
    common(synth, false);
    auto* train_cmd = app.add_subcommand("train", "fit encoder and network on the training split");
    common(train_cmd, true);
    auto* eval_cmd = app.add_subcommand("evaluate", "train or load all variants and score them on the test split");
    common(eval_cmd, true);
    auto* predict_cmd = app.add_subcommand("predict", "predict the continuation of running cases");
    predict_cmd->add_option("--checkpoint", f.checkpoint, "trained checkpoint")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--input", f.input, "CSV with the events observed so far")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help is reported through ParseError with code 0.
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (predict_cmd->parsed()) {
            cmd_predict(f.checkpoint, f.input, out);
            return 0;
        }
        RunConfig config = f.config.empty() ? RunConfig{} : load_run_config(f.config);
        if (!f.log.empty()) config.log_path = f.log;
        if (!f.out.empty()) config.out_dir = f.out;
        if (f.seed) config.seed = f.seed;
        if (!f.text_model.empty()) config.text_model = f.text_model;
        if (f.vector_size) config.vector_size = *f.vector_size;
        if (!f.abstractions.empty()) {
            config.abstractions.clear();
            for (const auto& a : f.abstractions) config.abstractions.push_back(parse_abstraction(a));
        }
        for (const auto& decl : f.attributes) {
            const auto eq = decl.find('=');
            if (eq == std::string::npos) throw ConfigError("--attribute expects NAME=KIND, got '" + decl + "'");
            config.schema.push_back({decl.substr(0, eq), parse_attribute_kind(decl.substr(eq + 1))});
        }
        config.text_kind();  // validates model name and size early

        if (stats->parsed()) cmd_stats(config, out);
        else if (synth->parsed()) cmd_synth(config, out);
        else if (train_cmd->parsed()) cmd_train(config, out);
        else if (eval_cmd->parsed()) cmd_evaluate(config, out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace textpm
