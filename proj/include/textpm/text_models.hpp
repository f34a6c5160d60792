#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "textpm/binary_io.hpp"
#include "textpm/text_pipeline.hpp"

namespace textpm {

enum class TextModelFamily : std::uint8_t { bow = 1, bong = 2, pv = 3, lda = 4 };

struct TextModelKind {
    TextModelFamily family = TextModelFamily::bow;
    std::size_t vector_size = 50;
    std::size_t ngram = 1;  // n-gram order, BoNG only; BoW is always 1

    bool operator==(const TextModelKind&) const = default;
};

/// Short name such as "bow-50", "bong2-100", "pv-20", "lda-10".
std::string to_string(const TextModelKind& kind);

/// Parses a family name (bow|bong|pv|lda) plus size; throws ParamError.
TextModelKind make_text_model_kind(std::string_view family, std::size_t vector_size, std::size_t ngram = 2);

/// Paragraph-vector hyperparameters (PV-DM with averaged context).
struct PvOptions {
    std::size_t window = 2;
    std::size_t epochs = 20;
    double learning_rate = 0.025;
    double min_learning_rate = 0.0001;
};

/// Collapsed Gibbs sampler settings. alpha <= 0 selects 50 / K.
struct LdaOptions {
    double alpha = 0.0;
    double beta = 0.01;
    std::size_t burn_in = 500;
    std::size_t inference_iterations = 100;
};

struct TextModelOptions {
    PvOptions pv;
    LdaOptions lda;
};

/// A fitted, immutable document encoder with a fixed output length.
class TextModel {
public:
    virtual ~TextModel() = default;

    virtual TextModelKind kind() const = 0;
    std::size_t dimension() const { return kind().vector_size; }
    std::uint64_t seed() const { return seed_; }

    /// Fixed-length vector for a preprocessed document. Thread-safe.
    virtual std::vector<double> encode(const TokenSequence& doc) const = 0;

    /// Serializes the kind-specific payload (see write_text_model).
    virtual void save_body(BinaryWriter& w) const = 0;

protected:
    explicit TextModel(std::uint64_t seed) : seed_(seed) {}

private:
    std::uint64_t seed_;
};

/// Space-joined consecutive n-grams of a token sequence.
std::vector<std::string> ngrams(const TokenSequence& doc, std::size_t n);

/// BoW (n = 1) and BoNG (n >= 2): tf * idf over a frequency-capped vocabulary,
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfIdfModel final : public TextModel {
public:
    static TfIdfModel fit(const TextModelKind& kind, const Corpus& corpus, std::uint64_t seed);
    TfIdfModel(TextModelKind kind, std::vector<std::string> terms, std::vector<double> idf, std::uint64_t seed);

    TextModelKind kind() const override { return kind_; }
    std::vector<double> encode(const TokenSequence& doc) const override;
    void save_body(BinaryWriter& w) const override;

    /// Selected terms in lexicographic order; component i of encode() is term i.
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<double>& idf() const { return idf_; }

private:
    TextModelKind kind_;
    std::vector<std::string> terms_;
    std::vector<double> idf_;
};

/// Paragraph vectors: word, document and softmax weights trained jointly to
/// predict each word from the average of its context and document vectors.
/// Encoding infers a new document vector with the word-side weights frozen.
class ParagraphVectorModel final : public TextModel {
public:
    static ParagraphVectorModel fit(std::size_t dimension, const Corpus& corpus, std::uint64_t seed,
                                    const PvOptions& options = {});
    ParagraphVectorModel(std::vector<std::string> vocabulary, Eigen::MatrixXd word_vectors,
                         Eigen::MatrixXd output_weights, Eigen::VectorXd output_bias, PvOptions options,
                         std::uint64_t seed);

    TextModelKind kind() const override;
    std::vector<double> encode(const TokenSequence& doc) const override;
    void save_body(BinaryWriter& w) const override;

    const std::vector<std::string>& vocabulary() const { return vocabulary_; }

    /// Mean cross-entropy of predicting each word of `doc` from its context and `doc_vector`.
    double context_loss(const TokenSequence& doc, const Eigen::VectorXd& doc_vector) const;

private:
    std::vector<int> word_ids(const TokenSequence& doc) const;

    std::vector<std::string> vocabulary_;
    Eigen::MatrixXd words_;       // V x D, one row per word
    Eigen::MatrixXd out_weights_;  // V x D
    Eigen::VectorXd out_bias_;     // V
    PvOptions options_;
};

/// LDA topic model learned by collapsed Gibbs sampling; documents encode as
/// their posterior topic proportions.
class LdaModel final : public TextModel {
public:
    /// `log_likelihood_trace`, when given, receives log p(w | z) after every sweep.
    static LdaModel fit(std::size_t topics, const Corpus& corpus, std::uint64_t seed, const LdaOptions& options = {},
                        std::vector<double>* log_likelihood_trace = nullptr);
    LdaModel(std::vector<std::string> vocabulary, Eigen::MatrixXd topic_word, double alpha, double beta,
             std::size_t inference_iterations, std::uint64_t seed);

    TextModelKind kind() const override;
    std::vector<double> encode(const TokenSequence& doc) const override;
    void save_body(BinaryWriter& w) const override;

    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    /// K x V matrix of p(word | topic).
    const Eigen::MatrixXd& topic_word() const { return topic_word_; }
    double alpha() const { return alpha_; }

private:
    std::vector<std::string> vocabulary_;
    Eigen::MatrixXd topic_word_;
    double alpha_;
    double beta_;
    std::size_t inference_iterations_;
};

std::unique_ptr<TextModel> fit_text_model(const TextModelKind& kind, const Corpus& corpus, std::uint64_t seed,
                                          const TextModelOptions& options = {});

/// Embeds a model (kind tag, hyperparameters, seed, learned arrays) in a stream.
void write_text_model(BinaryWriter& w, const TextModel& model);
std::unique_ptr<TextModel> read_text_model(BinaryReader& r);

/// Standalone model file: magic "TPMTEXTM", format version, then the model.
inline constexpr std::string_view kTextModelMagic = "TPMTEXTM";
inline constexpr std::uint32_t kTextModelVersion = 1;

void save_text_model(const TextModel& model, const std::string& path);
std::unique_ptr<TextModel> load_text_model(const std::string& path);
std::string serialize_text_model(const TextModel& model);
std::unique_ptr<TextModel> deserialize_text_model(std::string_view bytes);

}  // namespace textpm
