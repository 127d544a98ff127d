#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghazal/corpus.hpp"

namespace ghazal {

using TokenList = std::vector<std::string>;

struct TokenizedPoem {
    int poem_index = 0;
    std::vector<TokenList> verses;  // one list per input verse, possibly empty
    TokenList flat_tokens;          // verses concatenated in order

    std::size_t token_count() const { return flat_tokens.size(); }
    bool operator==(const TokenizedPoem&) const = default;
};

enum class ReductionMode { Stem, Lemmatize, None };

std::string_view to_string(ReductionMode mode);
/// Accepts "stem", "lemmatize", "none"; throws Error(Usage) otherwise.
ReductionMode parse_reduction_mode(std::string_view text);

using LemmaDictionary = std::map<std::string, std::string, std::less<>>;

struct PrepConfig {
    StopwordSet stopwords;
    ReductionMode reduction_mode = ReductionMode::Stem;
    std::optional<LemmaDictionary> lemma_dictionary;
};

/// Fold Arabic yeh/kaf to Persian, strip Arabic diacritics (U+064B..U+0652),
/// turn punctuation into spaces, collapse whitespace and trim. ZWNJ is kept.
/// Invalid UTF-8 bytes become U+FFFD.
std::string normalize(std::string_view text);

/// Split a normalized verse on spaces.
TokenList tokenize(std::string_view normalized_verse);

TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords);

/// Rule-based Persian suffix/prefix stripper. Never returns an empty string
/// and never lengthens the token.
///
/// 1. A leading "می‌" (with ZWNJ) is dropped when at least two letters follow.
/// 2. First suffix pass: longest match among plural/comparative markers
///    (ها های هایی تر ترین), pronoun clitics (م ت ش مان تان شان), ZWNJ-attached
///    enclitics (‌ای ‌ی ‌ام ‌اش) and a bare indefinite/ezafe "ی".
/// 3. Second pass, only after a pronoun or enclitic was removed: one more
///    plural/comparative marker.
/// A strip is applied only if at least two code points remain; a trailing
/// ZWNJ left behind by a strip is removed.
std::string stem(std::string_view token);

/// Reduce one token per the configured mode. Throws Error(Usage) in
/// lemmatize mode without a dictionary.
std::string reduce(std::string_view token, const PrepConfig& config);

/// normalize -> tokenize -> drop stop words -> reduce -> drop stop words again.
TokenizedPoem preprocess_poem(const Poem& poem, const PrepConfig& config);

std::vector<TokenizedPoem> preprocess_book(const Book& book, const PrepConfig& config);

/// UTF-8 TSV, `surface<TAB>lemma` per line, `#` comments. Keys and values
/// are normalized.
LemmaDictionary load_lemma_dictionary(const std::filesystem::path& path);

/// Number of Unicode code points in valid UTF-8.
std::size_t codepoint_count(std::string_view s);

}  // namespace ghazal
