#include "textpm/text_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "textpm/error.hpp"
#include "textpm/rng.hpp"

namespace textpm {
namespace {

std::vector<std::string> sorted_vocabulary(const Corpus& corpus) {
    std::vector<std::string> vocab;
    for (const auto& tf : vocabulary(corpus)) vocab.push_back(tf.term);
    return vocab;
}

std::unordered_map<std::string, int> index_of(const std::vector<std::string>& vocab) {
    std::unordered_map<std::string, int> idx;
    idx.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) idx.emplace(vocab[i], static_cast<int>(i));
    return idx;
}

std::vector<int> to_ids(const TokenSequence& doc, const std::unordered_map<std::string, int>& idx) {
    std::vector<int> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc) {
        auto it = idx.find(tok);
        if (it != idx.end()) ids.push_back(it->second);
    }
    return ids;
}

std::size_t token_count(const Corpus& corpus) {
    std::size_t n = 0;
    for (const auto& d : corpus.documents) n += d.size();
    return n;
}

void softmax_inplace(Eigen::VectorXd& v) {
    const double mx = v.maxCoeff();
    v = (v.array() - mx).exp();
    v /= v.sum();
}

/// Context-averaged hidden vector for position i of `ids`; returns the number
/// of context words used.
std::size_t context_hidden(const std::vector<int>& ids, std::size_t i, std::size_t window,
                           const Eigen::MatrixXd& words, const Eigen::VectorXd& doc, Eigen::VectorXd& h) {
    h = doc;
    std::size_t m = 0;
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(ids.size() - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        h += words.row(ids[j]).transpose();
        ++m;
    }
    h /= static_cast<double>(m + 1);
    return m;
}

double learning_rate(const PvOptions& o, std::size_t step, std::size_t total) {
    const double progress = total == 0 ? 0.0 : static_cast<double>(step) / static_cast<double>(total);
    return std::max(o.min_learning_rate, o.learning_rate * (1.0 - progress));
}

}  // namespace

std::string to_string(const TextModelKind& kind) {
    const std::string size = std::to_string(kind.vector_size);
    switch (kind.family) {
        case TextModelFamily::bow: return "bow-" + size;
        case TextModelFamily::bong: return "bong" + std::to_string(kind.ngram) + "-" + size;
        case TextModelFamily::pv: return "pv-" + size;
        case TextModelFamily::lda: return "lda-" + size;
    }
    return "unknown";
}

TextModelKind make_text_model_kind(std::string_view family, std::size_t vector_size, std::size_t ngram) {
    if (vector_size < 1) throw ParamError("text vector size must be at least 1");
    TextModelKind k;
    k.vector_size = vector_size;
    if (family == "bow") {
        k.family = TextModelFamily::bow;
    } else if (family == "bong") {
        if (ngram < 1) throw ParamError("n-gram order must be at least 1");
        k.family = TextModelFamily::bong;
        k.ngram = ngram;
    } else if (family == "pv") {
        k.family = TextModelFamily::pv;
    } else if (family == "lda") {
        k.family = TextModelFamily::lda;
    } else {
        throw ParamError("unknown text model '" + std::string(family) + "'");
    }
    return k;
}

std::vector<std::string> ngrams(const TokenSequence& doc, std::size_t n) {
    std::vector<std::string> out;
    if (n == 0 || doc.size() < n) return out;
    out.reserve(doc.size() - n + 1);
    for (std::size_t i = 0; i + n <= doc.size(); ++i) {
        std::string g = doc[i];
        for (std::size_t j = 1; j < n; ++j) {
            g.push_back(' ');
            g += doc[i + j];
        }
        out.push_back(std::move(g));
    }
    return out;
}

// BoW / BoNG ---------------------------------------------------------------

TfIdfModel::TfIdfModel(TextModelKind kind, std::vector<std::string> terms, std::vector<double> idf,
                       std::uint64_t seed)
    : TextModel(seed), kind_(kind), terms_(std::move(terms)), idf_(std::move(idf)) {
    if (terms_.size() != idf_.size() || terms_.size() > kind_.vector_size) {
        throw CorruptError("tf-idf vocabulary and idf table disagree");
    }
}

TfIdfModel TfIdfModel::fit(const TextModelKind& kind, const Corpus& corpus, std::uint64_t seed) {
    if (kind.vector_size < 1) throw ParamError("text vector size must be at least 1");
    const std::size_t n = kind.family == TextModelFamily::bow ? 1 : kind.ngram;
    if (n < 1) throw ParamError("n-gram order must be at least 1");

    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // term -> (frequency, df)
    for (const auto& doc : corpus.documents) {
        auto grams = ngrams(doc, n);
        for (const auto& g : grams) ++counts[g].first;
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (const auto& g : grams) ++counts[g].second;
    }
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(counts.begin(), counts.end());
    // std::map iteration is lexicographic, so a stable sort keeps that as the tie-break.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second.first > b.second.first; });
    if (ranked.size() > kind.vector_size) ranked.resize(kind.vector_size);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    const double n_docs = static_cast<double>(corpus.documents.size());
    std::vector<std::string> terms;
    std::vector<double> idf;
    for (const auto& [term, fd] : ranked) {
        terms.push_back(term);
        idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(fd.second))) + 1.0);
    }
    TextModelKind k = kind;
    if (k.family == TextModelFamily::bow) k.ngram = 1;
    return TfIdfModel(k, std::move(terms), std::move(idf), seed);
}

std::vector<double> TfIdfModel::encode(const TokenSequence& doc) const {
    std::vector<double> out(kind_.vector_size, 0.0);
    for (const auto& g : ngrams(doc, kind_.family == TextModelFamily::bow ? 1 : kind_.ngram)) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), g);
        if (it != terms_.end() && *it == g) out[static_cast<std::size_t>(it - terms_.begin())] += 1.0;
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) out[i] *= idf_[i];
    return out;
}

void TfIdfModel::save_body(BinaryWriter& w) const {
    w.strs(terms_);
    w.f64s(idf_);
}

// Paragraph vectors -------------------------------------------------------

ParagraphVectorModel::ParagraphVectorModel(std::vector<std::string> vocabulary, Eigen::MatrixXd word_vectors,
                                           Eigen::MatrixXd output_weights, Eigen::VectorXd output_bias,
                                           PvOptions options, std::uint64_t seed)
    : TextModel(seed),
      vocabulary_(std::move(vocabulary)),
      words_(std::move(word_vectors)),
      out_weights_(std::move(output_weights)),
      out_bias_(std::move(output_bias)),
      options_(options) {
    const auto v = static_cast<Eigen::Index>(vocabulary_.size());
    if (words_.rows() != v || out_weights_.rows() != v || out_bias_.size() != v ||
        out_weights_.cols() != words_.cols() || words_.cols() < 1) {
        throw CorruptError("paragraph-vector weight shapes disagree");
    }
}

ParagraphVectorModel ParagraphVectorModel::fit(std::size_t dimension, const Corpus& corpus, std::uint64_t seed,
                                               const PvOptions& options) {
    if (dimension < 1) throw ParamError("text vector size must be at least 1");
    const std::size_t total_tokens = token_count(corpus);
    if (total_tokens == 0) throw FitError("paragraph vectors need a non-empty corpus");

    auto vocab = sorted_vocabulary(corpus);
    const auto idx = index_of(vocab);
    const auto V = static_cast<Eigen::Index>(vocab.size());
    const auto D = static_cast<Eigen::Index>(dimension);

    Rng rng(seed);
    const double scale = 0.5 / static_cast<double>(dimension);
    Eigen::MatrixXd words(V, D);
    for (Eigen::Index i = 0; i < V; ++i)
        for (Eigen::Index j = 0; j < D; ++j) words(i, j) = rng.uniform(-scale, scale);
    Eigen::MatrixXd docs(static_cast<Eigen::Index>(corpus.documents.size()), D);
    for (Eigen::Index i = 0; i < docs.rows(); ++i)
        for (Eigen::Index j = 0; j < D; ++j) docs(i, j) = rng.uniform(-scale, scale);
    Eigen::MatrixXd out_w = Eigen::MatrixXd::Zero(V, D);
    Eigen::VectorXd out_b = Eigen::VectorXd::Zero(V);

    std::vector<std::vector<int>> ids;
    ids.reserve(corpus.documents.size());
    for (const auto& d : corpus.documents) ids.push_back(to_ids(d, idx));

    const std::size_t total_steps = options.epochs * total_tokens;
    std::size_t step = 0;
    Eigen::VectorXd h(D), scores(V), grad_h(D), doc_vec(D);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        for (std::size_t d = 0; d < ids.size(); ++d) {
            const auto& seq = ids[d];
            for (std::size_t i = 0; i < seq.size(); ++i) {
                const double lr = learning_rate(options, step++, total_steps);
                doc_vec = docs.row(static_cast<Eigen::Index>(d)).transpose();
                const std::size_t m = context_hidden(seq, i, options.window, words, doc_vec, h);
                scores = out_w * h + out_b;
                softmax_inplace(scores);
                scores(seq[i]) -= 1.0;
                grad_h = out_w.transpose() * scores;
                out_w.noalias() -= lr * scores * h.transpose();
                out_b -= lr * scores;
                const Eigen::VectorXd share = (lr / static_cast<double>(m + 1)) * grad_h;
                docs.row(static_cast<Eigen::Index>(d)) -= share.transpose();
                const std::size_t lo = i >= options.window ? i - options.window : 0;
                const std::size_t hi = std::min(seq.size() - 1, i + options.window);
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j != i) words.row(seq[j]) -= share.transpose();
                }
            }
        }
    }
    return ParagraphVectorModel(std::move(vocab), std::move(words), std::move(out_w), std::move(out_b), options,
                                seed);
}

TextModelKind ParagraphVectorModel::kind() const {
    return TextModelKind{TextModelFamily::pv, static_cast<std::size_t>(words_.cols()), 1};
}

std::vector<int> ParagraphVectorModel::word_ids(const TokenSequence& doc) const {
    std::vector<int> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc) {
        auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), tok);
        if (it != vocabulary_.end() && *it == tok) ids.push_back(static_cast<int>(it - vocabulary_.begin()));
    }
    return ids;
}

std::vector<double> ParagraphVectorModel::encode(const TokenSequence& doc) const {
    const Eigen::Index D = words_.cols();
    const auto ids = word_ids(doc);
    if (ids.empty()) return std::vector<double>(static_cast<std::size_t>(D), 0.0);

    Rng rng(mix_seed(seed(), 0xD0C));
    const double scale = 0.5 / static_cast<double>(D);
    Eigen::VectorXd d(D);
    for (Eigen::Index j = 0; j < D; ++j) d(j) = rng.uniform(-scale, scale);

    const std::size_t total_steps = options_.epochs * ids.size();
    std::size_t step = 0;
    Eigen::VectorXd h(D), scores(out_bias_.size());
    for (std::size_t epoch = 0; epoch < options_.epochs; ++epoch) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double lr = learning_rate(options_, step++, total_steps);
            const std::size_t m = context_hidden(ids, i, options_.window, words_, d, h);
            scores = out_weights_ * h + out_bias_;
            softmax_inplace(scores);
            scores(ids[i]) -= 1.0;
            d -= (lr / static_cast<double>(m + 1)) * (out_weights_.transpose() * scores);
        }
    }
    return {d.data(), d.data() + D};
}

double ParagraphVectorModel::context_loss(const TokenSequence& doc, const Eigen::VectorXd& doc_vector) const {
    const auto ids = word_ids(doc);
    if (ids.empty()) return 0.0;
    Eigen::VectorXd h(words_.cols()), scores(out_bias_.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        context_hidden(ids, i, options_.window, words_, doc_vector, h);
        scores = out_weights_ * h + out_bias_;
        softmax_inplace(scores);
        loss -= std::log(std::max(scores(ids[i]), 1e-300));
    }
    return loss / static_cast<double>(ids.size());
}

void ParagraphVectorModel::save_body(BinaryWriter& w) const {
    w.strs(vocabulary_);
    w.u64(static_cast<std::uint64_t>(words_.cols()));
    w.u64(options_.window);
    w.u64(options_.epochs);
    w.f64(options_.learning_rate);
    w.f64(options_.min_learning_rate);
    for (Eigen::Index i = 0; i < words_.rows(); ++i)
        for (Eigen::Index j = 0; j < words_.cols(); ++j) w.f64(words_(i, j));
    for (Eigen::Index i = 0; i < out_weights_.rows(); ++i)
        for (Eigen::Index j = 0; j < out_weights_.cols(); ++j) w.f64(out_weights_(i, j));
    for (Eigen::Index i = 0; i < out_bias_.size(); ++i) w.f64(out_bias_(i));
}

// LDA ---------------------------------------------------------------------

LdaModel::LdaModel(std::vector<std::string> vocabulary, Eigen::MatrixXd topic_word, double alpha, double beta,
                   std::size_t inference_iterations, std::uint64_t seed)
    : TextModel(seed),
      vocabulary_(std::move(vocabulary)),
      topic_word_(std::move(topic_word)),
      alpha_(alpha),
      beta_(beta),
      inference_iterations_(inference_iterations) {
    if (topic_word_.cols() != static_cast<Eigen::Index>(vocabulary_.size()) || topic_word_.rows() < 1 ||
        !(alpha_ > 0.0) || !(beta_ > 0.0)) {
        throw CorruptError("LDA parameters are inconsistent");
    }
}

LdaModel LdaModel::fit(std::size_t topics, const Corpus& corpus, std::uint64_t seed, const LdaOptions& options,
                       std::vector<double>* log_likelihood_trace) {
    if (topics < 1) throw ParamError("LDA needs at least one topic");
    if (token_count(corpus) == 0) throw FitError("LDA needs a non-empty corpus");

    auto vocab = sorted_vocabulary(corpus);
    const auto idx = index_of(vocab);
    const std::size_t K = topics;
    const std::size_t V = vocab.size();
    const double alpha = options.alpha > 0.0 ? options.alpha : 50.0 / static_cast<double>(K);
    const double beta = options.beta;
    const double vbeta = static_cast<double>(V) * beta;

    std::vector<std::vector<int>> docs;
    docs.reserve(corpus.documents.size());
    for (const auto& d : corpus.documents) docs.push_back(to_ids(d, idx));

    Rng rng(seed);
    std::vector<std::vector<int>> z(docs.size());
    std::vector<std::vector<int>> n_dk(docs.size(), std::vector<int>(K, 0));
    std::vector<int> n_kw(K * V, 0);
    std::vector<int> n_k(K, 0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        z[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const int k = static_cast<int>(rng.below(K));
            z[d][i] = k;
            ++n_dk[d][k];
            ++n_kw[k * V + docs[d][i]];
            ++n_k[k];
        }
    }

    auto log_likelihood = [&] {
        double ll = 0.0;
        const double lg_beta = std::lgamma(beta);
        for (std::size_t k = 0; k < K; ++k) {
            ll += std::lgamma(vbeta) - std::lgamma(n_k[k] + vbeta);
            for (std::size_t w = 0; w < V; ++w) {
                const int c = n_kw[k * V + w];
                if (c > 0) ll += std::lgamma(c + beta) - lg_beta;
            }
        }
        return ll;
    };

    std::vector<double> p(K);
    for (std::size_t iter = 0; iter < options.burn_in; ++iter) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const int w = docs[d][i];
                int k = z[d][i];
                --n_dk[d][k];
                --n_kw[k * V + w];
                --n_k[k];
                double total = 0.0;
                for (std::size_t t = 0; t < K; ++t) {
                    total += (n_dk[d][t] + alpha) * (n_kw[t * V + w] + beta) / (n_k[t] + vbeta);
                    p[t] = total;
                }
                const double u = rng.uniform() * total;
                k = static_cast<int>(std::upper_bound(p.begin(), p.end(), u) - p.begin());
                if (k >= static_cast<int>(K)) k = static_cast<int>(K) - 1;
                z[d][i] = k;
                ++n_dk[d][k];
                ++n_kw[k * V + w];
                ++n_k[k];
            }
        }
        if (log_likelihood_trace) log_likelihood_trace->push_back(log_likelihood());
    }

    Eigen::MatrixXd phi(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(V));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t w = 0; w < V; ++w)
            phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w)) =
                (n_kw[k * V + w] + beta) / (n_k[k] + vbeta);
    return LdaModel(std::move(vocab), std::move(phi), alpha, beta, options.inference_iterations, seed);
}

TextModelKind LdaModel::kind() const {
    return TextModelKind{TextModelFamily::lda, static_cast<std::size_t>(topic_word_.rows()), 1};
}

std::vector<double> LdaModel::encode(const TokenSequence& doc) const {
    const auto K = static_cast<std::size_t>(topic_word_.rows());
    std::vector<int> ids;
    for (const auto& tok : doc) {
        auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), tok);
        if (it != vocabulary_.end() && *it == tok) ids.push_back(static_cast<int>(it - vocabulary_.begin()));
    }
    std::vector<double> theta(K, 1.0 / static_cast<double>(K));
    if (ids.empty()) return theta;

    Rng rng(mix_seed(seed(), 0x1DA));
    std::vector<int> z(ids.size());
    std::vector<int> n_dk(K, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        z[i] = static_cast<int>(rng.below(K));
        ++n_dk[z[i]];
    }
    const double denom = static_cast<double>(ids.size()) + static_cast<double>(K) * alpha_;
    std::fill(theta.begin(), theta.end(), 0.0);
    std::size_t samples = 0;
    auto accumulate = [&] {
        for (std::size_t k = 0; k < K; ++k) theta[k] += (n_dk[k] + alpha_) / denom;
        ++samples;
    };

    const std::size_t burn = inference_iterations_ / 2;
    std::vector<double> p(K);
    for (std::size_t iter = 0; iter < inference_iterations_; ++iter) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            int k = z[i];
            --n_dk[k];
            double total = 0.0;
            for (std::size_t t = 0; t < K; ++t) {
                total += (n_dk[t] + alpha_) * topic_word_(static_cast<Eigen::Index>(t), ids[i]);
                p[t] = total;
            }
            const double u = rng.uniform() * total;
            k = static_cast<int>(std::upper_bound(p.begin(), p.end(), u) - p.begin());
            if (k >= static_cast<int>(K)) k = static_cast<int>(K) - 1;
            z[i] = k;
            ++n_dk[k];
        }
        if (iter >= burn) accumulate();
    }
    if (samples == 0) accumulate();
    double sum = 0.0;
    for (double v : theta) sum += v;
    for (double& v : theta) v /= sum;
    return theta;
}

void LdaModel::save_body(BinaryWriter& w) const {
    w.strs(vocabulary_);
    w.u64(static_cast<std::uint64_t>(topic_word_.rows()));
    w.f64(alpha_);
    w.f64(beta_);
    w.u64(inference_iterations_);
    for (Eigen::Index k = 0; k < topic_word_.rows(); ++k)
        for (Eigen::Index v = 0; v < topic_word_.cols(); ++v) w.f64(topic_word_(k, v));
}

// Factory and persistence -------------------------------------------------

std::unique_ptr<TextModel> fit_text_model(const TextModelKind& kind, const Corpus& corpus, std::uint64_t seed,
                                          const TextModelOptions& options) {
    switch (kind.family) {
        case TextModelFamily::bow:
        case TextModelFamily::bong: return std::make_unique<TfIdfModel>(TfIdfModel::fit(kind, corpus, seed));
        case TextModelFamily::pv:
            return std::make_unique<ParagraphVectorModel>(
                ParagraphVectorModel::fit(kind.vector_size, corpus, seed, options.pv));
        case TextModelFamily::lda:
            return std::make_unique<LdaModel>(LdaModel::fit(kind.vector_size, corpus, seed, options.lda));
    }
    throw ParamError("unknown text model family");
}

void write_text_model(BinaryWriter& w, const TextModel& model) {
    const TextModelKind k = model.kind();
    w.u8(static_cast<std::uint8_t>(k.family));
    w.u64(k.vector_size);
    w.u64(k.ngram);
    w.u64(model.seed());
    model.save_body(w);
}

namespace {

Eigen::MatrixXd read_matrix(BinaryReader& r, std::uint64_t rows, std::uint64_t cols) {
    if (cols != 0 && rows > UINT64_MAX / cols) throw CorruptError("matrix shape overflow");
    r.need_elems(rows * cols, 8);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
    return m;
}

}  // namespace

std::unique_ptr<TextModel> read_text_model(BinaryReader& r) {
    const auto family = static_cast<TextModelFamily>(r.u8());
    TextModelKind kind;
    kind.family = family;
    kind.vector_size = r.u64();
    kind.ngram = r.u64();
    const std::uint64_t seed = r.u64();
    switch (family) {
        case TextModelFamily::bow:
        case TextModelFamily::bong: {
            auto terms = r.strs();
            auto idf = r.f64s();
            if (kind.vector_size < 1 || kind.ngram < 1) throw CorruptError("invalid tf-idf header");
            return std::make_unique<TfIdfModel>(kind, std::move(terms), std::move(idf), seed);
        }
        case TextModelFamily::pv: {
            auto vocab = r.strs();
            const std::uint64_t dim = r.u64();
            PvOptions o;
            o.window = r.u64();
            o.epochs = r.u64();
            o.learning_rate = r.f64();
            o.min_learning_rate = r.f64();
            if (dim != kind.vector_size) throw CorruptError("paragraph-vector dimension mismatch");
            auto words = read_matrix(r, vocab.size(), dim);
            auto out_w = read_matrix(r, vocab.size(), dim);
            Eigen::VectorXd out_b = read_matrix(r, vocab.size(), 1).col(0);
            return std::make_unique<ParagraphVectorModel>(std::move(vocab), std::move(words), std::move(out_w),
                                                          std::move(out_b), o, seed);
        }
        case TextModelFamily::lda: {
            auto vocab = r.strs();
            const std::uint64_t topics = r.u64();
            const double alpha = r.f64();
            const double beta = r.f64();
            const std::uint64_t iters = r.u64();
            if (topics != kind.vector_size) throw CorruptError("LDA topic count mismatch");
            auto phi = read_matrix(r, topics, vocab.size());
            return std::make_unique<LdaModel>(std::move(vocab), std::move(phi), alpha, beta, iters, seed);
        }
    }
    throw CorruptError("unknown text model tag");
}

std::string serialize_text_model(const TextModel& model) {
    BinaryWriter w;
    write_header(w, kTextModelMagic, kTextModelVersion);
    write_text_model(w, model);
    return w.bytes();
}

std::unique_ptr<TextModel> deserialize_text_model(std::string_view bytes) {
    BinaryReader r(bytes);
    read_header(r, kTextModelMagic, kTextModelVersion);
    auto model = read_text_model(r);
    if (!r.at_end()) throw CorruptError("trailing bytes after text model");
    return model;
}

void save_text_model(const TextModel& model, const std::string& path) {
    write_file(path, serialize_text_model(model));
}

std::unique_ptr<TextModel> load_text_model(const std::string& path) { return deserialize_text_model(read_file(path)); }

}  // namespace textpm
