#include "ghazal/report.hpp"

#include <algorithm>
#include <memory>

#include "ghazal/cluster.hpp"
#include "ghazal/corpus.hpp"
#include "ghazal/embed.hpp"
#include "ghazal/error.hpp"
#include "ghazal/features.hpp"
#include "ghazal/format.hpp"
#include "ghazal/fuse.hpp"
#include "ghazal/sha256.hpp"
#include "ghazal/svg.hpp"
#include "ghazal/textprep.hpp"
#include "ghazal/topics.hpp"

namespace fs = std::filesystem;

namespace ghazal {

std::vector<const ManifestEntry*> ReportBundle::of_kind(std::string_view kind) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries) {
        if (e.kind == kind) out.push_back(&e);
    }
    return out;
}

namespace {

struct BookData {
    const Book* book = nullptr;
    std::vector<TokenizedPoem> poems;
    std::vector<int> indices;
    std::vector<std::string> titles;
};

class Emitter {
public:
    explicit Emitter(fs::path root) : root_(std::move(root)) {}

    void write(const std::string& book, const std::string& kind, const fs::path& relative, std::string_view bytes) {
        const auto path = root_ / relative;
        written_.push_back(path);
        write_file(path, bytes);
        entries_.push_back({book, kind, relative, sha256_hex(bytes)});
    }

    fs::path book_path(const std::string& book, const std::string& file) const {
        return fs::path("books") / book / file;
    }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        for (const auto& p : written_) {
            // Drop directories this run left empty.
            for (auto dir = p.parent_path(); !dir.empty() && dir != root_.parent_path(); dir = dir.parent_path()) {
                if (!fs::is_empty(dir, ec) || ec) break;
                fs::remove(dir, ec);
            }
        }
    }

    std::vector<ManifestEntry>& entries() { return entries_; }
    const fs::path& root() const { return root_; }
    void track(const fs::path& p) { written_.push_back(p); }

private:
    fs::path root_;
    std::vector<ManifestEntry> entries_;
    std::vector<fs::path> written_;
};

void cluster_and_emit(Emitter& em, const BookData& bd, const std::vector<Point>& points, const RunConfig& cfg,
                      const std::string& prefix, std::string& stage) {
    const auto& title = bd.book->title;
    stage = "kmeans";
    if (points.size() < cfg.k_clusters) {
        fail_data("book '" + title + "' has " + std::to_string(points.size()) + " poems, fewer than k_clusters=" +
                  std::to_string(cfg.k_clusters));
    }
    const auto assignment = kmeans(points, KMeansConfig{cfg.k_clusters, cfg.kmeans_seed});
    stage = "pca";
    const auto projection = pca_project(points, 2);
    stage = "emit";
    em.write(title, prefix + "-scatter", em.book_path(title, prefix + "_scatter.svg"),
             render_scatter(projection, assignment, bd.titles, bd.indices, title + " - " + prefix));
    em.write(title, prefix + "-assignment", em.book_path(title, prefix + "_clusters.csv"),
             assignment_csv(assignment, bd.indices));
    em.write(title, prefix + "-projection", em.book_path(title, prefix + "_pca.csv"),
             projection_csv(projection, bd.indices));
}

std::vector<WeightedTerm> topic_weights(const TopicModel& model, const Vocabulary& vocab, int t, std::size_t n) {
    std::vector<WeightedTerm> out;
    for (const auto id : topic_top_word_ids(model, t, n)) out.emplace_back(vocab.term(id), model.phi_at(t, id));
    return out;
}

LdaConfig lda_config(const RunConfig& cfg) {
    LdaConfig lc;
    lc.k = cfg.k_topics;
    lc.max_sweeps = cfg.lda_max_sweeps;
    lc.seed = cfg.lda_seed;
    return lc;
}

void run_stages(const RunConfig& cfg, Emitter& em, std::string& stage) {
    stage = "load";
    const Corpus corpus = load_corpus(cfg.corpus);
    PrepConfig prep;
    prep.stopwords = load_stopwords(cfg.stopwords);
    prep.reduction_mode = cfg.reduction;
    if (cfg.lemmas) prep.lemma_dictionary = load_lemma_dictionary(*cfg.lemmas);

    stage = "preprocess";
    std::vector<BookData> books;
    std::vector<TokenizedPoem> all_poems;
    for (const auto& book : corpus.books) {
        BookData bd;
        bd.book = &book;
        bd.poems = preprocess_book(book, prep);
        for (const auto& p : book.poems) {
            bd.indices.push_back(p.index);
            bd.titles.push_back(p.title);
        }
        all_poems.insert(all_poems.end(), bd.poems.begin(), bd.poems.end());
        books.push_back(std::move(bd));
    }

    const auto stages = cfg.effective_stages();

    if (stages.contains(Stage::Frequency)) {
        stage = "freq";
        for (const auto& bd : books) {
            TermCounts counts;
            for (const auto& p : bd.poems) {
                for (const auto& [t, c] : term_frequencies(p)) counts[t] += c;
            }
            if (counts.empty()) fail_data("book '" + bd.book->title + "' has no tokens after preprocessing");
            const auto ranked = rank_terms(counts);
            const auto& title = bd.book->title;
            em.write(title, "histogram", em.book_path(title, "histogram.svg"),
                     render_histogram(ranked, cfg.histogram_top_n, title));
            WordCloudOptions wc;
            wc.max_words = cfg.wordcloud_words;
            em.write(title, "wordcloud", em.book_path(title, "wordcloud.svg"),
                     render_wordcloud(layout_wordcloud(ranked, wc), title));
            std::string csv = "term,count\n";
            for (const auto& [t, w] : ranked) csv += t + "," + std::to_string(static_cast<long long>(w)) + '\n';
            em.write(title, "frequency", em.book_path(title, "frequencies.csv"), csv);
        }
    }

    if (stages.contains(Stage::ClusterTop5)) {
        stage = "features";
        const auto vocab = build_vocabulary(all_poems);
        for (const auto& bd : books) {
            std::vector<Point> points;
            for (const auto& p : bd.poems) points.push_back(top_k_bow(p, vocab, cfg.top_k).values);
            cluster_and_emit(em, bd, points, cfg, "top5", stage);
            stage = "features";
        }
    }

    if (stages.contains(Stage::ClusterTrigram) || stages.contains(Stage::Similarity)) {
        stage = "features";
        const auto vocab = build_trigram_vocabulary(all_poems);
        for (const auto& bd : books) {
            std::vector<FeatureVector> vectors;
            for (const auto& p : bd.poems) vectors.push_back(trigram_bow(p, vocab));
            if (stages.contains(Stage::Similarity)) {
                stage = "similarity";
                const auto matrix = similarity_matrix(vectors);
                const auto& title = bd.book->title;
                em.write(title, "heatmap", em.book_path(title, "similarity_heatmap.svg"),
                         render_heatmap(matrix, title));
                em.write(title, "similarity", em.book_path(title, "similarity.csv"), similarity_csv(matrix));
            }
            if (stages.contains(Stage::ClusterTrigram)) {
                std::vector<Point> points;
                for (auto& v : vectors) points.push_back(v.values);
                cluster_and_emit(em, bd, points, cfg, "trigram", stage);
            }
            stage = "features";
        }
    }

    const bool want_topics = stages.contains(Stage::Topics);
    const bool want_fused = stages.contains(Stage::FuseCluster);
    if (!want_topics && !want_fused) return;

    // Per-book LDA, one document per poem.
    std::vector<TopicModel> models;
    for (const auto& bd : books) {
        stage = "lda";
        const auto vocab = build_vocabulary(bd.poems);
        auto model = fit_lda(bd.poems, vocab, lda_config(cfg));
        if (want_topics) {
            stage = "emit";
            const auto& title = bd.book->title;
            em.write(title, "theta", em.book_path(title, "lda_theta.csv"), theta_csv(model, bd.indices));
            em.write(title, "lda-model", em.book_path(title, "lda.model"), serialize_topic_model(model));
            for (int t = 0; t < model.k; ++t) {
                const auto weights = topic_weights(model, vocab, t, cfg.topic_cloud_words);
                em.write(title, "topic-wordcloud", em.book_path(title, "topic_" + std::to_string(t) + "_wordcloud.svg"),
                         render_wordcloud(layout_wordcloud(weights), title + " - topic " + std::to_string(t)));
            }
        }
        models.push_back(std::move(model));
    }
    if (!want_fused) return;

    stage = "embed";
    std::unique_ptr<TokenEmbedder> embedder;
    if (cfg.embeddings) {
        embedder = std::make_unique<EmbeddingTable>(load_embedding_table(*cfg.embeddings));
    } else {
        embedder = std::make_unique<HashEmbedder>(cfg.hash_dim, cfg.hash_seed);
    }

    stage = "fuse";
    const FusionShape shape{static_cast<std::size_t>(cfg.k_topics), embedder->dim()};
    std::vector<std::vector<FusionInput>> book_inputs;
    std::vector<FusionInput> all_inputs;
    for (std::size_t b = 0; b < books.size(); ++b) {
        const auto& bd = books[b];
        auto& inputs = book_inputs.emplace_back();
        std::string coverage = "poem_index,covered_tokens,oov_tokens\n";
        for (std::size_t d = 0; d < bd.poems.size(); ++d) {
            const auto pe = poem_embedding(bd.poems[d], *embedder);
            coverage += std::to_string(pe.poem_index) + "," + std::to_string(pe.covered_tokens) + "," +
                        std::to_string(pe.oov_tokens) + '\n';
            inputs.push_back(build_fusion_input(doc_topic_vector(models[b], d), pe.vector, cfg.alpha, shape,
                                                bd.indices[d]));
        }
        em.write(bd.book->title, "embedding-coverage", em.book_path(bd.book->title, "embedding_coverage.csv"),
                 coverage);
        all_inputs.insert(all_inputs.end(), inputs.begin(), inputs.end());
    }

    AutoencoderConfig ac;
    ac.hidden_dim = cfg.hidden_dim;
    ac.epochs = cfg.ae_epochs;
    ac.batch_size = cfg.ae_batch;
    ac.seed = cfg.ae_seed;
    const auto model = train_autoencoder(std::span<const FusionInput>(all_inputs), ac);
    em.write("", "autoencoder-loss", "autoencoder_loss.csv", training_loss_csv(model));
    em.write("", "autoencoder-weights", "autoencoder.weights", serialize_autoencoder(model));

    for (std::size_t b = 0; b < books.size(); ++b) {
        stage = "fuse";
        std::vector<Point> latents;
        std::string csv = "poem_index";
        for (std::size_t j = 0; j < model.hidden_dim(); ++j) csv += ",z" + std::to_string(j);
        csv += '\n';
        for (const auto& in : book_inputs[b]) {
            auto latent = encode(model, in);
            csv += std::to_string(latent.poem_index);
            for (const double v : latent.vector) csv += "," + format_significant(v);
            csv += '\n';
            latents.push_back(std::move(latent.vector));
        }
        const auto& title = books[b].book->title;
        em.write(title, "fused-latent", em.book_path(title, "fused_latent.csv"), csv);
        cluster_and_emit(em, books[b], latents, cfg, "fused", stage);
    }
}

}  // namespace

ReportBundle run_pipeline(const RunConfig& config) {
    config.validate();
    Emitter em(config.out);
    std::string stage = "setup";
    try {
        run_stages(config, em, stage);

        stage = "emit";
        auto& entries = em.entries();
        std::sort(entries.begin(), entries.end(),
                  [](const ManifestEntry& a, const ManifestEntry& b) { return a.relative < b.relative; });
        std::string meta = "ghazal-run 1\n[config]\n" + config.echo() + "[artifacts]\n";
        for (const auto& e : entries) meta += e.sha256 + "  " + e.relative.generic_string() + '\n';
        const fs::path meta_path = config.out / "run.meta";
        em.track(meta_path);
        write_file(meta_path, meta);

        ReportBundle bundle;
        bundle.root = config.out;
        bundle.entries = std::move(entries);
        bundle.meta_path = meta_path;
        return bundle;
    } catch (const Error& e) {
        em.rollback();
        throw Error(e.kind(), "stage " + stage + ": " + e.what());
    } catch (const std::exception& e) {
        em.rollback();
        throw Error(ErrorKind::Data, "stage " + stage + ": " + e.what());
    }
}

}  // namespace ghazal
