#include "ghazal/corpus.hpp"

#include <algorithm>
#include <array>

#include <unicode/utf8.h>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"
#include "ghazal/textprep.hpp"

namespace fs = std::filesystem;

namespace ghazal {

namespace {

// Persian stop-word table, row by row as published (78 cells, 74 distinct).
constexpr std::array<std::string_view, 78> kStopwordTable = {
    "ما", "دگر", "نیست", "و", "آن", "مرا", "میکند", "کش", "همه", "به", "او", "میکنی", "نیست",
    "گر", "دیگر", "کس", "داشت", "این", "چگونه", "با", "تو", "است", "رسان", "برای", "شده", "کشید",
    "اگر", "تا", "میکردم", "دار", "اما", "آور", "ده", "یا", "کرد", "رساند", "باز", "میکند", "چقدر",
    "هر", "گرفت", "میکردیم", "چون", "همچو", "آورد", "داد", "میکنم", "کن", "زیر", "مثل", "میتواند", "بر",
    "را", "گیر", "من", "کیست", "همچون", "میشود", "این", "هست", "بود", "چرا", "شاید", "زد", "که",
    "ز", "باید", "از", "چیست", "خود", "میان", "در", "است", "باش", "هم", "آیا", "زدن", "میرفت",
};

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_dirs) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (want_dirs && entry.is_directory()) {
            out.push_back(entry.path());
        } else if (!want_dirs && entry.is_regular_file() && entry.path().extension() == ".txt") {
            out.push_back(entry.path());
        }
    }
    // Byte-wise order of the file name, independent of the platform's path ordering.
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    return out;
}

Poem parse_poem(const fs::path& file, int index) {
    const std::string bytes = read_file(file);
    if (!is_valid_utf8(bytes)) fail_data("file not valid UTF-8: " + file.string());

    Poem poem;
    poem.index = index;
    bool have_title = false;
    for (const auto& raw : split_lines(bytes)) {
        const auto line = trim_ascii(raw);
        if (!have_title) {
            // Leading blank lines before the title are tolerated.
            if (line.empty()) continue;
            poem.title = std::string(line);
            have_title = true;
            continue;
        }
        if (!line.empty()) poem.verses.emplace_back(line);
    }
    if (poem.verses.empty()) fail_data("poem file with no verse lines: " + file.string());
    return poem;
}

}  // namespace

std::size_t Corpus::poem_count() const {
    std::size_t n = 0;
    for (const auto& b : books) n += b.poems.size();
    return n;
}

bool is_valid_utf8(std::string_view bytes) {
    const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
    const auto length = static_cast<int32_t>(bytes.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0) return false;
    }
    return true;
}

Corpus load_corpus(const fs::path& root) {
    if (!fs::is_directory(root)) fail_data("missing corpus directory: " + root.string());

    Corpus corpus;
    auto normalized = fs::absolute(root).lexically_normal();
    if (!normalized.has_filename()) normalized = normalized.parent_path();
    corpus.corpus_id = normalized.filename().string();
    for (const auto& book_dir : sorted_entries(root, /*want_dirs=*/true)) {
        Book book;
        book.title = book_dir.filename().string();
        const auto files = sorted_entries(book_dir, /*want_dirs=*/false);
        if (files.empty()) fail_data("empty book: " + book_dir.string());
        int index = 0;
        for (const auto& file : files) book.poems.push_back(parse_poem(file, index++));
        corpus.books.push_back(std::move(book));
    }
    validate_corpus(corpus);
    return corpus;
}

void validate_corpus(const Corpus& corpus) {
    if (corpus.books.empty()) fail_data("corpus has no books");
    std::set<std::string> titles;
    for (const auto& book : corpus.books) {
        if (!titles.insert(book.title).second) fail_data("duplicate book title: " + book.title);
        if (book.poems.empty()) fail_data("empty book: " + book.title);
        for (std::size_t i = 0; i < book.poems.size(); ++i) {
            const auto& poem = book.poems[i];
            if (poem.index != static_cast<int>(i)) {
                fail_data("non-contiguous poem index in book " + book.title);
            }
            if (poem.verses.empty()) fail_data("poem with no verses: " + poem.title);
            for (const auto& v : poem.verses) {
                if (trim_ascii(v).empty()) fail_data("blank verse in poem: " + poem.title);
            }
        }
    }
}

StopwordSet::StopwordSet(std::span<const std::string> raw_tokens) {
    for (const auto& raw : raw_tokens) {
        auto token = normalize(raw);
        if (!token.empty()) tokens_.insert(std::move(token));
    }
}

std::span<const std::string_view> default_stopword_table() { return kStopwordTable; }

StopwordSet load_stopwords(const std::optional<fs::path>& path) {
    std::vector<std::string> raw;
    if (!path) {
        raw.assign(kStopwordTable.begin(), kStopwordTable.end());
        return StopwordSet(raw);
    }
    const std::string bytes = read_file(*path);
    if (!is_valid_utf8(bytes)) fail_data("stop-word file not valid UTF-8: " + path->string());
    for (const auto& line : split_lines(bytes)) {
        const auto t = trim_ascii(line);
        if (t.empty() || t.front() == '#') continue;
        raw.emplace_back(t);
    }
    StopwordSet set(raw);
    if (set.empty()) fail_data("empty stop-word file: " + path->string());
    return set;
}

}  // namespace ghazal
