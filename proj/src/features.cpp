#include "ghazal/features.hpp"

#include <algorithm>
#include <cmath>

#include "ghazal/format.hpp"

namespace ghazal {

Vocabulary build_vocabulary(std::span<const TokenizedPoem> poems) {
    if (poems.empty()) fail_data("empty corpus vocabulary");
    Vocabulary vocab;
    for (const auto& poem : poems) {
        for (const auto& t : poem.flat_tokens) vocab.add(t);
    }
    if (vocab.empty()) fail_data("empty corpus vocabulary");
    return vocab;
}

TermCounts term_frequencies(const TokenizedPoem& poem) {
    TermCounts counts;
    for (const auto& t : poem.flat_tokens) ++counts[t];
    return counts;
}

FeatureVector top_k_bow(const TokenizedPoem& poem, const Vocabulary& vocab, std::size_t k) {
    if (k == 0) fail_usage("top_k_bow: k must be >= 1");

    struct Entry {
        std::size_t vocab_pos;
        std::size_t count;
        std::size_t first_seen;
    };
    std::vector<Entry> entries;
    std::map<std::string_view, std::size_t> slot;
    for (std::size_t i = 0; i < poem.flat_tokens.size(); ++i) {
        const auto& token = poem.flat_tokens[i];
        auto [it, inserted] = slot.try_emplace(token, entries.size());
        if (inserted) {
            const auto pos = vocab.find(token);
            if (!pos) fail_data("out-of-vocabulary token: " + token);
            entries.push_back({*pos, 0, i});
        }
        ++entries[it->second].count;
    }
    // entries are already in first-occurrence order; stable sort keeps it for ties.
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.count > b.count; });

    FeatureVector fv{poem.poem_index, std::vector<double>(vocab.size(), 0.0)};
    for (std::size_t i = 0; i < std::min(k, entries.size()); ++i) {
        fv.values[entries[i].vocab_pos] = static_cast<double>(entries[i].count);
    }
    return fv;
}

FeatureVector unigram_bow(const TokenizedPoem& poem, const Vocabulary& vocab) {
    FeatureVector fv{poem.poem_index, std::vector<double>(vocab.size(), 0.0)};
    for (const auto& t : poem.flat_tokens) {
        const auto pos = vocab.find(t);
        if (!pos) fail_data("out-of-vocabulary token: " + t);
        fv.values[*pos] += 1.0;
    }
    return fv;
}

std::vector<Trigram> extract_trigrams(const TokenizedPoem& poem) {
    std::vector<Trigram> out;
    for (const auto& verse : poem.verses) {
        for (std::size_t i = 0; i + 3 <= verse.size(); ++i) {
            out.push_back({verse[i], verse[i + 1], verse[i + 2]});
        }
    }
    return out;
}

TrigramVocabulary build_trigram_vocabulary(std::span<const TokenizedPoem> poems) {
    TrigramVocabulary vocab;
    for (const auto& poem : poems) {
        for (const auto& tri : extract_trigrams(poem)) vocab.add(tri);
    }
    if (vocab.empty()) fail_data("empty trigram vocabulary: no verse has three tokens");
    return vocab;
}

FeatureVector trigram_bow(const TokenizedPoem& poem, const TrigramVocabulary& vocab) {
    FeatureVector fv{poem.poem_index, std::vector<double>(vocab.size(), 0.0)};
    for (const auto& tri : extract_trigrams(poem)) {
        const auto pos = vocab.find(tri);
        if (!pos) fail_data("out-of-vocabulary trigram: " + trigram_label(tri));
        fv.values[*pos] += 1.0;
    }
    return fv;
}

CosineResult cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail_usage("cosine_similarity: length mismatch (" + std::to_string(a.size()) + " vs " +
                   std::to_string(b.size()) + ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return {0.0, true};
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    // Rounding can push |c| a hair past 1.
    return {std::clamp(c, -1.0, 1.0), false};
}

SimilarityMatrix similarity_matrix(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) fail_usage("similarity_matrix: no vectors");
    const std::size_t n = vectors.size();
    SimilarityMatrix m;
    m.n = n;
    m.values.assign(n * n, 0.0);
    m.zero_rows.assign(n, false);
    for (const auto& v : vectors) m.poem_order.push_back(v.poem_index);

    for (std::size_t i = 0; i < n; ++i) {
        m.zero_rows[i] = std::all_of(vectors[i].values.begin(), vectors[i].values.end(),
                                     [](double x) { return x == 0.0; });
        m.values[i * n + i] = m.zero_rows[i] ? 0.0 : 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = cosine_similarity(vectors[i], vectors[j]).value;
            m.values[i * n + j] = c;
            m.values[j * n + i] = c;
        }
    }
    // A length mismatch in a single-vector list would otherwise go unnoticed.
    if (n == 1) (void)cosine_similarity(vectors[0], vectors[0]);
    return m;
}

std::string similarity_csv(const SimilarityMatrix& m) {
    std::string out;
    for (std::size_t j = 0; j < m.n; ++j) out += "," + std::to_string(m.poem_order[j]);
    out += '\n';
    for (std::size_t i = 0; i < m.n; ++i) {
        out += std::to_string(m.poem_order[i]);
        for (std::size_t j = 0; j < m.n; ++j) out += "," + format_significant(m.at(i, j));
        out += '\n';
    }
    return out;
}

std::string feature_csv(std::span<const FeatureVector> vectors, std::span<const std::string> term_labels) {
    std::string out = "term";
    for (const auto& v : vectors) {
        if (v.values.size() != term_labels.size()) fail_usage("feature_csv: vector length != label count");
        out += "," + std::to_string(v.poem_index);
    }
    out += '\n';
    for (std::size_t t = 0; t < term_labels.size(); ++t) {
        out += term_labels[t];
        for (const auto& v : vectors) out += "," + format_significant(v.values[t]);
        out += '\n';
    }
    return out;
}

std::string trigram_label(const Trigram& t) { return t[0] + " " + t[1] + " " + t[2]; }

}  // namespace ghazal
