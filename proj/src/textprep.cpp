#include "ghazal/textprep.hpp"

#include <algorithm>
#include <array>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"

namespace ghazal {

namespace {

constexpr UChar32 kZwnj = 0x200C;
constexpr std::string_view kZwnjUtf8 = "‌";

bool is_punctuation(UChar32 c) {
    switch (u_charType(c)) {
        case U_DASH_PUNCTUATION:
        case U_START_PUNCTUATION:
        case U_END_PUNCTUATION:
        case U_CONNECTOR_PUNCTUATION:
        case U_OTHER_PUNCTUATION:
        case U_INITIAL_PUNCTUATION:
        case U_FINAL_PUNCTUATION:
            return true;
        default:
            return false;
    }
}

void append_utf8(std::string& out, UChar32 c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, c);
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

enum class SuffixClass { Plural, Pronoun, Enclitic };

struct Suffix {
    std::string_view text;
    SuffixClass cls;
};

// Sorted longest first (by code points) so the first hit is the longest match.
constexpr std::array<Suffix, 16> kSuffixes = {{
    {"هایی", SuffixClass::Plural},
    {"ترین", SuffixClass::Plural},
    {"‌ای", SuffixClass::Enclitic},
    {"‌ام", SuffixClass::Enclitic},
    {"‌اش", SuffixClass::Enclitic},
    {"های", SuffixClass::Plural},
    {"مان", SuffixClass::Pronoun},
    {"تان", SuffixClass::Pronoun},
    {"شان", SuffixClass::Pronoun},
    {"‌ی", SuffixClass::Enclitic},
    {"ها", SuffixClass::Plural},
    {"تر", SuffixClass::Plural},
    {"م", SuffixClass::Pronoun},
    {"ت", SuffixClass::Pronoun},
    {"ش", SuffixClass::Pronoun},
    {"ی", SuffixClass::Enclitic},
}};

constexpr std::string_view kVerbalPrefix = "می‌";
constexpr std::size_t kMinStem = 2;

std::string_view drop_trailing_zwnj(std::string_view s) {
    while (s.ends_with(kZwnjUtf8)) s.remove_suffix(kZwnjUtf8.size());
    return s;
}

// One strip from the allowed classes; returns the class stripped, if any.
std::optional<SuffixClass> strip_once(std::string_view& word, bool plural_only) {
    for (const auto& suffix : kSuffixes) {
        if (plural_only && suffix.cls != SuffixClass::Plural) continue;
        if (!word.ends_with(suffix.text)) continue;
        auto rest = drop_trailing_zwnj(word.substr(0, word.size() - suffix.text.size()));
        if (codepoint_count(rest) < kMinStem) continue;
        word = rest;
        return suffix.cls;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(ReductionMode mode) {
    switch (mode) {
        case ReductionMode::Stem: return "stem";
        case ReductionMode::Lemmatize: return "lemmatize";
        case ReductionMode::None: return "none";
    }
    return "none";
}

ReductionMode parse_reduction_mode(std::string_view text) {
    if (text == "stem") return ReductionMode::Stem;
    if (text == "lemmatize") return ReductionMode::Lemmatize;
    if (text == "none") return ReductionMode::None;
    fail_usage("unknown reduction mode: " + std::string(text));
}

std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char ch : s) {
        if ((ch & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    bool pending_space = false;
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0) c = 0xFFFD;

        if (c == 0x064A) c = 0x06CC;       // Arabic yeh -> Persian yeh
        else if (c == 0x0643) c = 0x06A9;  // Arabic kaf -> Persian keheh
        if (c >= 0x064B && c <= 0x0652) continue;

        if (c != kZwnj && (u_isUWhiteSpace(c) || is_punctuation(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, c);
    }
    return out;
}

TokenList tokenize(std::string_view normalized_verse) {
    TokenList tokens;
    std::size_t start = 0;
    while (start < normalized_verse.size()) {
        auto sp = normalized_verse.find(' ', start);
        if (sp == std::string_view::npos) sp = normalized_verse.size();
        if (sp > start) tokens.emplace_back(normalized_verse.substr(start, sp - start));
        start = sp + 1;
    }
    return tokens;
}

TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords) {
    TokenList kept;
    kept.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!stopwords.contains(t)) kept.push_back(t);
    }
    return kept;
}

std::string stem(std::string_view token) {
    std::string_view word = token;
    if (word.starts_with(kVerbalPrefix) &&
        codepoint_count(word.substr(kVerbalPrefix.size())) >= 2) {
        word.remove_prefix(kVerbalPrefix.size());
    }
    const auto first = strip_once(word, /*plural_only=*/false);
    if (first && *first != SuffixClass::Plural) strip_once(word, /*plural_only=*/true);
    return std::string(word);
}

std::string reduce(std::string_view token, const PrepConfig& config) {
    switch (config.reduction_mode) {
        case ReductionMode::None:
            return std::string(token);
        case ReductionMode::Stem:
            return stem(token);
        case ReductionMode::Lemmatize: {
            if (!config.lemma_dictionary) fail_usage("lemmatize mode requires a lemma dictionary");
            const auto it = config.lemma_dictionary->find(token);
            if (it == config.lemma_dictionary->end() || it->second.empty()) return std::string(token);
            return it->second;
        }
    }
    return std::string(token);
}

TokenizedPoem preprocess_poem(const Poem& poem, const PrepConfig& config) {
    if (config.reduction_mode == ReductionMode::Lemmatize && !config.lemma_dictionary) {
        fail_usage("lemmatize mode requires a lemma dictionary");
    }
    TokenizedPoem out;
    out.poem_index = poem.index;
    out.verses.reserve(poem.verses.size());
    for (const auto& verse : poem.verses) {
        TokenList kept;
        for (const auto& token : remove_stopwords(tokenize(normalize(verse)), config.stopwords)) {
            auto reduced = reduce(token, config);
            if (reduced.empty() || config.stopwords.contains(reduced)) continue;
            kept.push_back(std::move(reduced));
        }
        out.flat_tokens.insert(out.flat_tokens.end(), kept.begin(), kept.end());
        out.verses.push_back(std::move(kept));
    }
    return out;
}

std::vector<TokenizedPoem> preprocess_book(const Book& book, const PrepConfig& config) {
    std::vector<TokenizedPoem> out;
    out.reserve(book.poems.size());
    for (const auto& poem : book.poems) out.push_back(preprocess_poem(poem, config));
    return out;
}

LemmaDictionary load_lemma_dictionary(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (!is_valid_utf8(bytes)) fail_data("lemma dictionary not valid UTF-8: " + path.string());
    LemmaDictionary dict;
    int line_no = 0;
    for (const auto& line : split_lines(bytes)) {
        ++line_no;
        const auto t = trim_ascii(line);
        if (t.empty() || t.front() == '#') continue;
        const auto tab = t.find('\t');
        if (tab == std::string_view::npos) {
            fail_data(path.string() + ":" + std::to_string(line_no) + ": expected surface<TAB>lemma");
        }
        auto surface = normalize(t.substr(0, tab));
        auto lemma = normalize(t.substr(tab + 1));
        if (surface.empty() || lemma.empty()) {
            fail_data(path.string() + ":" + std::to_string(line_no) + ": empty surface or lemma");
        }
        dict.insert_or_assign(std::move(surface), std::move(lemma));
    }
    return dict;
}

}  // namespace ghazal
