#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghazal/textprep.hpp"

namespace ghazal {

constexpr std::size_t kDefaultEmbeddingDim = 768;

/// Anything that can turn a token into a fixed-width vector.
class TokenEmbedder {
public:
    virtual ~TokenEmbedder() = default;
    virtual std::size_t dim() const = 0;
    /// Writes the token's vector into `out` (length dim()) and returns true,
    /// or returns false if the token is unknown.
    virtual bool embed(std::string_view token, std::span<double> out) const = 0;
};

/// Static token -> vector lookup, loaded from the embedding TSV.
class EmbeddingTable : public TokenEmbedder {
public:
    explicit EmbeddingTable(std::size_t dim);

    std::size_t dim() const override { return dim_; }
    bool embed(std::string_view token, std::span<double> out) const override;

    /// Replaces any existing vector. Throws Error(Data) on a length mismatch.
    void set(std::string token, std::vector<double> vec);
    const std::vector<double>* find(std::string_view token) const;
    std::size_t size() const { return vectors_.size(); }
    const std::map<std::string, std::vector<double>, std::less<>>& entries() const { return vectors_; }

    /// Non-fatal issues found while loading (duplicate tokens).
    std::vector<std::string> warnings;

private:
    std::size_t dim_;
    std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

/// Parse the embedding TSV: optional `#` comments, a `dim<TAB>D` header, then
/// `token<TAB>v1...vD` rows. Duplicate tokens: last row wins, with a warning.
EmbeddingTable parse_embedding_table(std::string_view text, std::string_view source = "<memory>");
EmbeddingTable load_embedding_table(const std::filesystem::path& path);

/// Canonical serialization: rows in code-point order, shortest round-trip floats.
std::string serialize_embedding_table(const EmbeddingTable& table);

/// Deterministic test double: every token gets a unit vector derived from a
/// seeded 64-bit hash of its bytes. Integer-only generation, so results agree
/// across platforms.
class HashEmbedder : public TokenEmbedder {
public:
    HashEmbedder(std::size_t dim, std::uint64_t seed);
    std::size_t dim() const override { return dim_; }
    bool embed(std::string_view token, std::span<double> out) const override;

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

HashEmbedder hash_provider(std::size_t dim, std::uint64_t seed);

struct PoemEmbedding {
    int poem_index = 0;
    std::vector<double> vector;
    std::size_t covered_tokens = 0;
    std::size_t oov_tokens = 0;
};

/// Mean of the vectors of covered tokens, multiplicity counted. Unknown tokens
/// are skipped and counted; no coverage yields the zero vector.
PoemEmbedding poem_embedding(const TokenizedPoem& poem, const TokenEmbedder& embedder);

}  // namespace ghazal
