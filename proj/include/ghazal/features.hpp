#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghazal/error.hpp"
#include "ghazal/textprep.hpp"

namespace ghazal {

using Trigram = std::array<std::string, 3>;

/// Terms in first-occurrence order with a reverse index.
template <typename Term>
class BasicVocabulary {
public:
    /// Returns the term's position, appending it if new.
    std::size_t add(const Term& term) {
        auto [it, inserted] = index_.try_emplace(term, terms_.size());
        if (inserted) terms_.push_back(term);
        return it->second;
    }

    std::optional<std::size_t> find(const Term& term) const {
        auto it = index_.find(term);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const Term& term(std::size_t i) const { return terms_.at(i); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<Term> terms_;
    std::map<Term, std::size_t> index_;
};

using Vocabulary = BasicVocabulary<std::string>;
using TrigramVocabulary = BasicVocabulary<Trigram>;

struct FeatureVector {
    int poem_index = 0;
    std::vector<double> values;
};

struct CosineResult {
    double value = 0.0;
    bool degenerate = false;  // at least one side was the zero vector
};

struct SimilarityMatrix {
    std::size_t n = 0;
    std::vector<int> poem_order;
    std::vector<double> values;  // row-major n*n
    std::vector<bool> zero_rows;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Unique unigrams in first-occurrence order. Throws Error(Data) if no poem
/// has any token.
Vocabulary build_vocabulary(std::span<const TokenizedPoem> poems);

using TermCounts = std::map<std::string, std::size_t>;

TermCounts term_frequencies(const TokenizedPoem& poem);

/// Raw counts of the poem's `k` most frequent terms, zero elsewhere. Ties at
/// equal count go to the term that occurs first in the poem.
FeatureVector top_k_bow(const TokenizedPoem& poem, const Vocabulary& vocab, std::size_t k = 5);

/// Full unigram counts over `vocab`.
FeatureVector unigram_bow(const TokenizedPoem& poem, const Vocabulary& vocab);

/// Width-3 windows inside each verse; no window crosses a verse boundary.
std::vector<Trigram> extract_trigrams(const TokenizedPoem& poem);

/// Throws Error(Data) if no poem yields a trigram.
TrigramVocabulary build_trigram_vocabulary(std::span<const TokenizedPoem> poems);

FeatureVector trigram_bow(const TokenizedPoem& poem, const TrigramVocabulary& vocab);

/// A.B / (|A| |B|); 0 with `degenerate` set when either vector is zero.
/// Throws Error(Usage) on length mismatch.
CosineResult cosine_similarity(std::span<const double> a, std::span<const double> b);

inline CosineResult cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
    return cosine_similarity(std::span<const double>(a.values), std::span<const double>(b.values));
}

/// Pairwise cosine matrix; diagonal is exactly 1 for nonzero rows.
SimilarityMatrix similarity_matrix(std::span<const FeatureVector> vectors);

/// Header `,<idx>...`, then `<idx>,<values>` rows, 9 significant digits.
std::string similarity_csv(const SimilarityMatrix& m);

/// Header `term,<poem idx>...`, one row per vocabulary position.
std::string feature_csv(std::span<const FeatureVector> vectors, std::span<const std::string> term_labels);

std::string trigram_label(const Trigram& t);

}  // namespace ghazal
