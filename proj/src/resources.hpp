#pragma once

#include <string_view>

namespace textpm::resources {

// Contents of resources/stopwords_en.txt and resources/lemmas_en.tsv,
// embedded at configure time.
std::string_view stop_words_en();
std::string_view lemmas_en();

}  // namespace textpm::resources
