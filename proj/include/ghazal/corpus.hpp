#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ghazal {

struct Poem {
    int index = 0;
    std::string title;
    std::vector<std::string> verses;  // raw UTF-8, one physical line each

    bool operator==(const Poem&) const = default;
};

struct Book {
    std::string title;
    std::vector<Poem> poems;

    bool operator==(const Book&) const = default;
};

struct Corpus {
    std::string corpus_id;
    std::vector<Book> books;

    std::size_t poem_count() const;
    bool operator==(const Corpus&) const = default;
};

/// Load a corpus laid out as `root/<book>/<poem>.txt`.
///
/// Books are ordered by directory name and poems by file name (byte-wise
/// lexicographic). The first line of each poem file is its title; every
/// remaining non-blank line is a verse. Poem indices restart at 0 per book.
/// Throws Error(Data) for a missing root, a book with no `.txt` files, invalid
/// UTF-8, or a poem with no verse lines.
Corpus load_corpus(const std::filesystem::path& root);

/// Throws Error(Data) unless the invariants on books, titles and indices hold.
void validate_corpus(const Corpus& corpus);

/// Normalized stop-word tokens.
class StopwordSet {
public:
    StopwordSet() = default;
    /// Tokens are normalized; empties after normalization are dropped.
    explicit StopwordSet(std::span<const std::string> raw_tokens);

    bool contains(std::string_view token) const { return tokens_.find(token) != tokens_.end(); }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::set<std::string, std::less<>>& tokens() const& { return tokens_; }
    // Moves out of a temporary so `for (auto& t : load_stopwords().tokens())` is safe.
    std::set<std::string, std::less<>> tokens() && { return std::move(tokens_); }

    bool operator==(const StopwordSet&) const = default;

private:
    std::set<std::string, std::less<>> tokens_;
};

/// Raw cells of the built-in Persian stop-word table, duplicates included.
std::span<const std::string_view> default_stopword_table();

/// Built-in default when `path` is empty; otherwise one token per line with
/// `#` comments. An existing file with no tokens is an error.
StopwordSet load_stopwords(const std::optional<std::filesystem::path>& path = std::nullopt);

bool is_valid_utf8(std::string_view bytes);

}  // namespace ghazal
