#include "textpm/text_pipeline.hpp"

#include <algorithm>
#include <map>

#include "resources.hpp"
#include "textpm/binary_io.hpp"
#include "textpm/error.hpp"

namespace textpm {
namespace {

/// Decodes one UTF-8 code point; returns false for a malformed sequence,
/// in which case `pos` skips a single byte.
bool decode_utf8(std::string_view s, std::size_t& pos, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    std::size_t len = 0;
    if (b0 < 0x80) {
        cp = b0;
        len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
        cp = b0 & 0x1F;
        len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
        cp = b0 & 0x0F;
        len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
        cp = b0 & 0x07;
        len = 4;
    } else {
        ++pos;
        return false;
    }
    if (pos + len > s.size()) {
        ++pos;
        return false;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return false;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    pos += len;
    return true;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t lower_cp(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c < 0x80) return c;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177)) return (c % 2 == 0) ? c + 1 : c;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x178) return 0xFF;
    if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 37;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 63;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    return c;
}

bool is_word_cp(char32_t c) {
    if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
    if (c == 0xD7 || c == 0xF7) return false;
    if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, currency, arrows, math, shapes
    if (c >= 0x2E00 && c <= 0x2E7F) return false;
    if (c >= 0x3000 && c <= 0x303F) return false;
    if (c >= 0xFE10 && c <= 0xFE6F) return false;
    if (c >= 0xFF00 && c <= 0xFF0F) return false;
    if (c >= 0xFF1A && c <= 0xFF20) return false;
    if (c >= 0xFF3B && c <= 0xFF40) return false;
    if (c >= 0xFF5B && c <= 0xFF65) return false;
    if (c >= 0x1F000 && c <= 0x1FAFF) return false;  // emoji and pictographs
    return true;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') f(line);
        start = end + 1;
    }
}

}  // namespace

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    char32_t cp = 0;
    while (pos < text.size()) {
        if (decode_utf8(text, pos, cp)) encode_utf8(lower_cp(cp), out);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    char32_t cp = 0;
    while (pos < text.size()) {
        const bool ok = decode_utf8(text, pos, cp);
        if (ok && is_word_cp(cp)) {
            encode_utf8(cp, current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

TextPipeline::TextPipeline(std::unordered_set<std::string> stop_words,
                           std::unordered_map<std::string, std::string> lemmas)
    : stop_words_(std::move(stop_words)), lemmas_(std::move(lemmas)) {}

TextPipeline TextPipeline::from_text(std::string_view stop_words, std::string_view lemmas) {
    std::unordered_set<std::string> stops;
    for_each_line(stop_words, [&](std::string_view line) {
        for (auto& tok : tokenize(line)) stops.insert(to_lower(tok));
    });
    std::unordered_map<std::string, std::string> lemma_map;
    for_each_line(lemmas, [&](std::string_view line) {
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw ConfigError("lemma line without tab: '" + std::string(line) + "'");
        lemma_map.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    });
    return TextPipeline(std::move(stops), std::move(lemma_map));
}

TextPipeline TextPipeline::from_files(const std::string& stop_word_path, const std::string& lemma_path) {
    return from_text(read_file(stop_word_path), read_file(lemma_path));
}

const TextPipeline& TextPipeline::english() {
    static const TextPipeline pipeline = from_text(resources::stop_words_en(), resources::lemmas_en());
    return pipeline;
}

std::string_view TextPipeline::lemmatize(std::string_view token) const {
    auto it = lemmas_.find(std::string(token));
    return it == lemmas_.end() ? token : std::string_view(it->second);
}

bool TextPipeline::is_stop_word(std::string_view token) const { return stop_words_.contains(std::string(token)); }

TokenSequence TextPipeline::preprocess(std::string_view document) const {
    TokenSequence out;
    for (const auto& tok : tokenize(to_lower(document))) {
        const std::string_view lemma = lemmatize(tok);
        if (!is_stop_word(lemma)) out.emplace_back(lemma);
    }
    return out;
}

TokenSequence preprocess(std::string_view document) { return TextPipeline::english().preprocess(document); }

Corpus build_corpus(const EventLog& log, const std::string& attribute, const TextPipeline& pipeline) {
    auto it = std::find_if(log.schema.begin(), log.schema.end(),
                           [&](const AttributeDecl& d) { return d.name == attribute; });
    if (it == log.schema.end() || it->kind != AttributeKind::textual) {
        throw SchemaError("attribute '" + attribute + "' is not declared textual");
    }
    Corpus corpus{attribute, {}};
    corpus.documents.reserve(log.event_count());
    for (const auto& t : log.traces) {
        for (const auto& e : t.events) {
            auto txt = e.textuals.find(attribute);
            corpus.documents.push_back(txt == e.textuals.end() ? TokenSequence{} : pipeline.preprocess(txt->second));
        }
    }
    return corpus;
}

std::vector<TermFrequency> vocabulary(const Corpus& corpus) {
    std::map<std::string, std::size_t> df;
    std::vector<std::string_view> seen;
    for (const auto& doc : corpus.documents) {
        seen.assign(doc.begin(), doc.end());
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto term : seen) ++df[std::string(term)];
    }
    std::vector<TermFrequency> out;
    out.reserve(df.size());
    for (auto& [term, n] : df) out.push_back({term, n});
    return out;
}

}  // namespace textpm
