#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "ghazal/textprep.hpp"

namespace ghazal {

enum class FeatureMode { Top5, Trigram, Fused };

std::string_view to_string(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view text);

/// Artifact groups a run can emit; each CLI subcommand selects one or all.
enum class Stage { Frequency, ClusterTop5, ClusterTrigram, Similarity, Topics, FuseCluster };

std::string_view to_string(Stage stage);

struct RunConfig {
    std::filesystem::path corpus;
    std::optional<std::filesystem::path> stopwords;
    std::optional<std::filesystem::path> lemmas;
    ReductionMode reduction = ReductionMode::Stem;
    FeatureMode mode = FeatureMode::Top5;
    std::set<Stage> stages;  // empty: the clustering stage for `mode`

    std::size_t k_clusters = 4;
    int k_topics = 4;
    double alpha = 15.0;
    std::size_t top_k = 5;

    std::optional<std::filesystem::path> embeddings;
    bool hash_embeddings = false;
    std::size_t hash_dim = 768;
    std::uint64_t hash_seed = 42;

    std::uint64_t lda_seed = 42;
    std::uint64_t ae_seed = 42;
    std::uint64_t kmeans_seed = 42;

    int lda_max_sweeps = 1000;
    int ae_epochs = 1000;
    std::size_t ae_batch = 128;
    std::size_t hidden_dim = 16;

    std::size_t histogram_top_n = 20;
    std::size_t wordcloud_words = 100;
    std::size_t topic_cloud_words = 30;

    std::filesystem::path out = "out";

    /// Sets every seed at once.
    void set_seed(std::uint64_t seed);
    std::set<Stage> effective_stages() const;
    /// Throws Error(Usage) on inconsistent settings.
    void validate() const;
    /// Canonical `key = value` lines for every setting except `out`.
    std::string echo() const;
};

/// Apply one `key = value` setting. Throws Error(Usage) for unknown keys or
/// bad values. Relative paths resolve against `base_dir`.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

/// Parse flat `key = value` text with `#` comments.
void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace ghazal
