// Command-line front end: one subcommand per artifact group, plus report-all.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"
#include "ghazal/report.hpp"
#include "ghazal/run_config.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string corpus;
    std::string stopwords;
    std::string embeddings;
    bool hash_embeddings = false;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "seed for every random stage (default 42)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--corpus", f.corpus, "corpus directory (one subdirectory per book)");
    cmd->add_option("--stopwords", f.stopwords, "stop-word file (default: built-in list)");
    cmd->add_option("--embeddings", f.embeddings, "embedding TSV for fused features");
    cmd->add_flag("--hash-embeddings", f.hash_embeddings, "use deterministic hash embeddings");
    cmd->add_option("--set", f.settings, "extra key=value override (repeatable)");
}

ghazal::RunConfig build_config(const Flags& f, const std::vector<ghazal::Stage>& stages) {
    ghazal::RunConfig cfg = f.config.empty() ? ghazal::RunConfig{} : ghazal::load_run_config(f.config);
    for (const auto& kv : f.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) ghazal::fail_usage("--set expects key=value, got '" + kv + "'");
        const std::string_view view(kv);
        ghazal::apply_setting(cfg, ghazal::trim_ascii(view.substr(0, eq)), view.substr(eq + 1));
    }
    if (!f.corpus.empty()) cfg.corpus = f.corpus;
    if (!f.stopwords.empty()) cfg.stopwords = f.stopwords;
    if (!f.embeddings.empty()) cfg.embeddings = f.embeddings;
    if (f.hash_embeddings) cfg.hash_embeddings = true;
    if (f.seed) cfg.set_seed(*f.seed);
    if (!f.out.empty()) cfg.out = f.out;
    cfg.stages = {stages.begin(), stages.end()};
    if (cfg.stages.contains(ghazal::Stage::FuseCluster)) cfg.mode = ghazal::FeatureMode::Fused;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    using ghazal::Stage;
    CLI::App app{"Unsupervised analysis of poetry corpora: frequencies, clustering, topics, fused embeddings"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        std::vector<Stage> stages;
    };
    const std::vector<Command> commands = {
        {"freq", "per-book word histograms and word clouds", {Stage::Frequency}},
        {"cluster-top5", "cluster poems on their five most frequent words", {Stage::ClusterTop5}},
        {"cluster-trigram", "cluster poems on verse trigram counts", {Stage::ClusterTrigram}},
        {"similarity", "trigram cosine-similarity heatmaps", {Stage::Similarity}},
        {"lda", "per-book LDA topics and topic word clouds", {Stage::Topics}},
        {"fuse-cluster", "cluster poems on LDA + embedding autoencoder features", {Stage::FuseCluster}},
        {"report-all", "every artifact group",
         {Stage::Frequency, Stage::ClusterTop5, Stage::ClusterTrigram, Stage::Similarity, Stage::Topics,
          Stage::FuseCluster}},
    };

    std::vector<Flags> flags(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
        add_common(sub, flags[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ghazal::ErrorKind::Usage);
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        try {
            const auto cfg = build_config(flags[i], commands[i].stages);
            const auto bundle = ghazal::run_pipeline(cfg);
            for (const auto& e : bundle.entries) {
                std::cout << e.sha256 << "  " << e.relative.generic_string() << '\n';
            }
            std::cout << "wrote " << bundle.entries.size() << " artifacts and " << bundle.meta_path.generic_string()
                      << '\n';
            return 0;
        } catch (const ghazal::Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return e.exit_code();
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return static_cast<int>(ghazal::ErrorKind::Data);
        }
    }
    return static_cast<int>(ghazal::ErrorKind::Usage);
}
