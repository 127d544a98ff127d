#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ghazal/run_config.hpp"

namespace ghazal {

struct ManifestEntry {
    std::string book;                 // empty for corpus-wide artifacts
    std::string kind;                 // e.g. "top5-scatter", "autoencoder-loss"
    std::filesystem::path relative;   // relative to the output directory
    std::string sha256;
};

struct ReportBundle {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;  // sorted by relative path
    std::filesystem::path meta_path;     // run.meta, hashes every entry

    /// Entries of one kind, in book order.
    std::vector<const ManifestEntry*> of_kind(std::string_view kind) const;
};

/// load -> preprocess -> features -> (top5 | trigram | LDA + embeddings +
/// autoencoder) -> k-means -> PCA -> SVG/CSV, for each selected stage.
///
/// Frequency, clustering, similarity and topic artifacts are per book. The
/// autoencoder is trained once on every book's fusion inputs, then each book
/// is encoded and clustered on its own. Output is byte-deterministic for a
/// fixed config. On failure every file written so far is removed and the
/// error is rethrown prefixed with the failing stage.
ReportBundle run_pipeline(const RunConfig& config);

}  // namespace ghazal
