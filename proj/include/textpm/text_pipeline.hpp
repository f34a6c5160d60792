#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "textpm/log_model.hpp"

namespace textpm {

using TokenSequence = std::vector<std::string>;

/// All instances of one textual attribute in a log, one document per event.
struct Corpus {
    std::string attribute;
    std::vector<TokenSequence> documents;
};

struct TermFrequency {
    std::string term;
    std::size_t df = 0;  // number of documents containing the term
};

/// Lowercase -> tokenize -> lemmatize -> stop-word filter.
class TextPipeline {
public:
    TextPipeline(std::unordered_set<std::string> stop_words, std::unordered_map<std::string, std::string> lemmas);

    /// Stop-word list and lemma dictionary shipped in resources/.
    static const TextPipeline& english();

    /// Loads resource files: one stop word per line; lemma lines `form<TAB>lemma`.
    /// Lines starting with '#' and blank lines are ignored.
    static TextPipeline from_files(const std::string& stop_word_path, const std::string& lemma_path);
    static TextPipeline from_text(std::string_view stop_words, std::string_view lemmas);

    TokenSequence preprocess(std::string_view document) const;

    std::string_view lemmatize(std::string_view token) const;
    bool is_stop_word(std::string_view token) const;

    std::size_t stop_word_count() const { return stop_words_.size(); }
    const std::unordered_map<std::string, std::string>& lemmas() const { return lemmas_; }

private:
    std::unordered_set<std::string> stop_words_;
    std::unordered_map<std::string, std::string> lemmas_;
};

/// Unicode-aware lowercase of UTF-8 text (Latin, Greek, Cyrillic ranges).
std::string to_lower(std::string_view text);

/// Splits UTF-8 text on runs of non-alphanumeric code points. Case is kept.
std::vector<std::string> tokenize(std::string_view text);

/// preprocess() with the bundled English resources.
TokenSequence preprocess(std::string_view document);

/// One token sequence per event of `log`, in iteration order.
Corpus build_corpus(const EventLog& log, const std::string& attribute,
                    const TextPipeline& pipeline = TextPipeline::english());

/// Distinct terms in lexicographic order with document frequencies.
std::vector<TermFrequency> vocabulary(const Corpus& corpus);

}  // namespace textpm
