#include "ghazal/run_config.hpp"

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"

namespace fs = std::filesystem;

namespace ghazal {

std::string_view to_string(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::Top5: return "top5";
        case FeatureMode::Trigram: return "trigram";
        case FeatureMode::Fused: return "fused";
    }
    return "top5";
}

FeatureMode parse_feature_mode(std::string_view text) {
    if (text == "top5") return FeatureMode::Top5;
    if (text == "trigram") return FeatureMode::Trigram;
    if (text == "fused") return FeatureMode::Fused;
    fail_usage("unknown feature mode: " + std::string(text));
}

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::Frequency: return "freq";
        case Stage::ClusterTop5: return "cluster-top5";
        case Stage::ClusterTrigram: return "cluster-trigram";
        case Stage::Similarity: return "similarity";
        case Stage::Topics: return "lda";
        case Stage::FuseCluster: return "fuse-cluster";
    }
    return "?";
}

void RunConfig::set_seed(std::uint64_t seed) {
    hash_seed = lda_seed = ae_seed = kmeans_seed = seed;
}

std::set<Stage> RunConfig::effective_stages() const {
    if (!stages.empty()) return stages;
    switch (mode) {
        case FeatureMode::Top5: return {Stage::ClusterTop5};
        case FeatureMode::Trigram: return {Stage::ClusterTrigram};
        case FeatureMode::Fused: return {Stage::FuseCluster};
    }
    return {};
}

void RunConfig::validate() const {
    if (corpus.empty()) fail_usage("config: corpus path is required");
    if (k_clusters < 1) fail_usage("config: k_clusters must be >= 1");
    if (k_topics < 1) fail_usage("config: k_topics must be >= 1");
    if (!(alpha > 0.0)) fail_usage("config: alpha must be > 0");
    if (top_k < 1) fail_usage("config: top_k must be >= 1");
    if (ae_epochs < 1 || ae_batch < 1 || hidden_dim < 1) fail_usage("config: autoencoder settings must be >= 1");
    if (lda_max_sweeps < 1) fail_usage("config: lda_max_sweeps must be >= 1");
    if (reduction == ReductionMode::Lemmatize && !lemmas) fail_usage("config: lemmatize requires 'lemmas'");
    if (effective_stages().contains(Stage::FuseCluster) && !embeddings && !hash_embeddings) {
        fail_usage("config: fused features need 'embeddings' or 'hash_embeddings = true'");
    }
}

std::string RunConfig::echo() const {
    std::map<std::string, std::string> kv;
    kv["corpus"] = corpus.generic_string();
    kv["stopwords"] = stopwords ? stopwords->generic_string() : "<default>";
    kv["lemmas"] = lemmas ? lemmas->generic_string() : "<none>";
    kv["reduction"] = std::string(to_string(reduction));
    kv["mode"] = std::string(to_string(mode));
    std::string st;
    for (const auto s : effective_stages()) st += (st.empty() ? "" : ",") + std::string(to_string(s));
    kv["stages"] = st;
    kv["k_clusters"] = std::to_string(k_clusters);
    kv["k_topics"] = std::to_string(k_topics);
    kv["alpha"] = format_roundtrip(alpha);
    kv["top_k"] = std::to_string(top_k);
    kv["embeddings"] = embeddings ? embeddings->generic_string() : "<none>";
    kv["hash_embeddings"] = hash_embeddings ? "true" : "false";
    kv["hash_dim"] = std::to_string(hash_dim);
    kv["hash_seed"] = std::to_string(hash_seed);
    kv["lda_seed"] = std::to_string(lda_seed);
    kv["ae_seed"] = std::to_string(ae_seed);
    kv["kmeans_seed"] = std::to_string(kmeans_seed);
    kv["lda_max_sweeps"] = std::to_string(lda_max_sweeps);
    kv["ae_epochs"] = std::to_string(ae_epochs);
    kv["ae_batch"] = std::to_string(ae_batch);
    kv["hidden_dim"] = std::to_string(hidden_dim);
    kv["histogram_top_n"] = std::to_string(histogram_top_n);
    kv["wordcloud_words"] = std::to_string(wordcloud_words);
    kv["topic_cloud_words"] = std::to_string(topic_cloud_words);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + '\n';
    return out;
}

namespace {

std::uint64_t to_u64(std::string_view v, std::string_view key) {
    const auto n = parse_integer(v, key);
    if (n < 0) fail_usage(std::string(key) + " must be >= 0");
    return static_cast<std::uint64_t>(n);
}

bool to_bool(std::string_view v, std::string_view key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail_usage(std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

fs::path resolve(std::string_view v, const fs::path& base) {
    fs::path p{std::string(v)};
    return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view value, const fs::path& base) {
    value = trim_ascii(value);
    // Numeric parse failures surface as usage errors, not data errors.
    try {
        if (key == "corpus") c.corpus = resolve(value, base);
        else if (key == "stopwords") c.stopwords = resolve(value, base);
        else if (key == "lemmas") c.lemmas = resolve(value, base);
        else if (key == "reduction") c.reduction = parse_reduction_mode(value);
        else if (key == "mode") c.mode = parse_feature_mode(value);
        else if (key == "k_clusters") c.k_clusters = to_u64(value, key);
        else if (key == "k_topics") c.k_topics = static_cast<int>(to_u64(value, key));
        else if (key == "alpha") c.alpha = parse_double(value, key);
        else if (key == "top_k") c.top_k = to_u64(value, key);
        else if (key == "embeddings") c.embeddings = resolve(value, base);
        else if (key == "hash_embeddings") c.hash_embeddings = to_bool(value, key);
        else if (key == "hash_dim") c.hash_dim = to_u64(value, key);
        else if (key == "hash_seed") c.hash_seed = to_u64(value, key);
        else if (key == "seed") c.set_seed(to_u64(value, key));
        else if (key == "lda_seed") c.lda_seed = to_u64(value, key);
        else if (key == "ae_seed") c.ae_seed = to_u64(value, key);
        else if (key == "kmeans_seed") c.kmeans_seed = to_u64(value, key);
        else if (key == "lda_max_sweeps") c.lda_max_sweeps = static_cast<int>(to_u64(value, key));
        else if (key == "ae_epochs") c.ae_epochs = static_cast<int>(to_u64(value, key));
        else if (key == "ae_batch") c.ae_batch = to_u64(value, key);
        else if (key == "hidden_dim") c.hidden_dim = to_u64(value, key);
        else if (key == "histogram_top_n") c.histogram_top_n = to_u64(value, key);
        else if (key == "wordcloud_words") c.wordcloud_words = to_u64(value, key);
        else if (key == "topic_cloud_words") c.topic_cloud_words = to_u64(value, key);
        else if (key == "out") c.out = resolve(value, base);
        else fail_usage("unknown config key: " + std::string(key));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Data) fail_usage(e.what());
        throw;
    }
}

void apply_config_text(RunConfig& config, std::string_view text, const fs::path& base) {
    int line_no = 0;
    for (const auto& raw : split_lines(text)) {
        ++line_no;
        const auto line = trim_ascii(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail_usage("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        apply_setting(config, trim_ascii(line.substr(0, eq)), line.substr(eq + 1), base);
    }
}

RunConfig load_run_config(const fs::path& path) {
    RunConfig config;
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        fail_usage(e.what());
    }
    apply_config_text(config, text, path.parent_path());
    return config;
}

}  // namespace ghazal
