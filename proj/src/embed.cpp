#include "ghazal/embed.hpp"

#include <cmath>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"
#include "ghazal/rng.hpp"

namespace ghazal {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) fail_data("embedding table: dim must be >= 1");
}

bool EmbeddingTable::embed(std::string_view token, std::span<double> out) const {
    const auto* v = find(token);
    if (!v) return false;
    std::copy(v->begin(), v->end(), out.begin());
    return true;
}

void EmbeddingTable::set(std::string token, std::vector<double> vec) {
    if (vec.size() != dim_) {
        fail_data("embedding table: vector for '" + token + "' has length " + std::to_string(vec.size()) +
                  ", expected " + std::to_string(dim_));
    }
    vectors_.insert_or_assign(std::move(token), std::move(vec));
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
    auto it = vectors_.find(token);
    return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embedding_table(std::string_view text, std::string_view source) {
    const std::string src(source);
    const auto lines = split_lines(text);
    std::size_t i = 0;
    while (i < lines.size() && (trim_ascii(lines[i]).empty() || trim_ascii(lines[i]).front() == '#')) ++i;
    if (i == lines.size()) fail_data(src + ": malformed header: missing 'dim<TAB>D' line");

    const auto header = split_fields(lines[i]);
    if (header.size() != 2 || header[0] != "dim") {
        fail_data(src + ":" + std::to_string(i + 1) + ": malformed header: expected 'dim<TAB>D'");
    }
    const auto dim = parse_integer(header[1], src + " header dim");
    if (dim < 1) fail_data(src + ": malformed header: dim must be >= 1");

    EmbeddingTable table(static_cast<std::size_t>(dim));
    for (++i; i < lines.size(); ++i) {
        if (trim_ascii(lines[i]).empty()) continue;
        const auto fields = split_fields(lines[i]);
        const std::string where = src + ":" + std::to_string(i + 1);
        if (fields.size() != table.dim() + 1) {
            fail_data(where + ": row arity " + std::to_string(fields.size()) + ", expected " +
                      std::to_string(table.dim() + 1));
        }
        std::vector<double> vec;
        vec.reserve(table.dim());
        for (std::size_t c = 1; c < fields.size(); ++c) vec.push_back(parse_double(fields[c], where));
        std::string token(fields[0]);
        if (table.find(token)) table.warnings.push_back(where + ": duplicate token '" + token + "', last row wins");
        table.set(std::move(token), std::move(vec));
    }
    return table;
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path) {
    return parse_embedding_table(read_file(path), path.string());
}

std::string serialize_embedding_table(const EmbeddingTable& table) {
    std::string out = "dim\t" + std::to_string(table.dim()) + '\n';
    // std::map over UTF-8 bytes is code-point order.
    for (const auto& [token, vec] : table.entries()) {
        out += token;
        for (const double v : vec) {
            out += '\t';
            out += format_roundtrip(v);
        }
        out += '\n';
    }
    return out;
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim == 0) fail_usage("hash provider: dim must be >= 1");
}

bool HashEmbedder::embed(std::string_view token, std::span<double> out) const {
    // FNV-1a over the token bytes, then mixed with the seed.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::uint64_t state = splitmix64(h ^ splitmix64(seed_));
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        state += 0x9E3779B97F4A7C15ULL;
        const std::uint64_t bits = splitmix64(state);
        // Uniform in [-1, 1) from the top 53 bits.
        const double v = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
        out[i] = v;
        norm2 += v * v;
    }
    if (norm2 == 0.0) {
        out[0] = 1.0;
        return true;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim_; ++i) out[i] *= inv;
    return true;
}

HashEmbedder hash_provider(std::size_t dim, std::uint64_t seed) { return HashEmbedder(dim, seed); }

PoemEmbedding poem_embedding(const TokenizedPoem& poem, const TokenEmbedder& embedder) {
    PoemEmbedding pe;
    pe.poem_index = poem.poem_index;
    pe.vector.assign(embedder.dim(), 0.0);
    std::vector<double> scratch(embedder.dim());
    for (const auto& token : poem.flat_tokens) {
        if (!embedder.embed(token, scratch)) {
            ++pe.oov_tokens;
            continue;
        }
        ++pe.covered_tokens;
        for (std::size_t i = 0; i < scratch.size(); ++i) pe.vector[i] += scratch[i];
    }
    if (pe.covered_tokens > 0) {
        const double n = static_cast<double>(pe.covered_tokens);
        for (auto& v : pe.vector) v /= n;
    }
    return pe;
}

}  // namespace ghazal
