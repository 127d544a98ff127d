// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ghazal/cluster.hpp"
#include "ghazal/corpus.hpp"
#include "ghazal/embed.hpp"
#include "ghazal/features.hpp"
#include "ghazal/format.hpp"
#include "ghazal/fuse.hpp"
#include "ghazal/rng.hpp"
#include "ghazal/textprep.hpp"
#include "ghazal/topics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace ghazal;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok && pass) detail << what;
        pass = pass && ok;
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

TokenizedPoem make_doc(TokenList tokens) {
    TokenizedPoem p;
    p.flat_tokens = tokens;
    p.verses = {std::move(tokens)};
    return p;
}

void cosine_oracle(Outcome& o) {
    const auto t0 = Clock::now();
    Rng rng(20240101);
    double worst = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        const std::size_t d = 1 + rng.below(50);
        std::vector<double> a(d), b(d);
        for (auto& x : a) x = rng.uniform(-1, 1);
        for (auto& x : b) x = rng.uniform(-1, 1);
        long double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < d; ++i) {
            dot += static_cast<long double>(a[i]) * b[i];
            na += static_cast<long double>(a[i]) * a[i];
            nb += static_cast<long double>(b[i]) * b[i];
        }
        const double direct = static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
        worst = std::max(worst, std::abs(cosine_similarity(a, b).value - direct));
    }
    o.check(worst <= 1e-12, "max oracle error " + format_roundtrip(worst));

    double worst_scale = 0.0;
    for (int s = 0; s < 100; ++s) {
        const std::size_t d = 1 + rng.below(50);
        std::vector<double> a(d), b(d);
        for (auto& x : a) x = rng.uniform(-1, 1);
        for (auto& x : b) x = rng.uniform(-1, 1);
        const double c = std::exp(rng.uniform(-10, 10));
        std::vector<double> ca(a);
        for (auto& x : ca) x *= c;
        worst_scale = std::max(worst_scale, std::abs(cosine_similarity(ca, b).value - cosine_similarity(a, b).value));
    }
    o.check(worst_scale <= 1e-12, "scale error " + format_roundtrip(worst_scale));
    const double secs = seconds_since(t0);
    o.check(secs < 1.0, "runtime " + format_roundtrip(secs) + " s");
    if (o.pass) o.detail << "max error " << worst << ", scale error " << worst_scale;
}

void trigram_fidelity(Outcome& o) {
    PrepConfig cfg;
    cfg.stopwords = load_stopwords();
    const auto tp = preprocess_poem(Poem{0, "t", {"بر لبانم سایه‌ای از پرسشی مرموز"}}, cfg);
    const auto tri = extract_trigrams(tp);
    const Trigram want{"سایه", "پرسش", "مرموز"};
    o.check(std::find(tri.begin(), tri.end(), want) != tri.end(), "trigram missing");
    o.detail << (o.pass ? "" : "; ") << "trigrams:";
    for (const auto& t : tri) o.detail << " (" << t[0] << " " << t[1] << " " << t[2] << ")";
}

void stopword_fidelity(Outcome& o) {
    // Table transcribed one cell per line; compare as a set after normalization.
    std::set<std::string> table;
    std::size_t cells = 0;
    for (const auto& line : split_lines(read_file(testing::data_dir() / "stopword_table.txt"))) {
        const auto t = trim_ascii(line);
        if (t.empty() || t.front() == '#') continue;
        ++cells;
        table.insert(normalize(t));
    }
    const auto& defaults = load_stopwords().tokens();
    const std::set<std::string> got(defaults.begin(), defaults.end());
    o.check(got == table, "set mismatch");
    o.detail << (o.pass ? "" : "; ") << cells << " cells, " << table.size() << " unique, default has " << got.size();
}

// Best accuracy over all label permutations.
double best_permutation_accuracy(const std::vector<int>& truth, const std::vector<int>& pred, int k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) hit += perm[static_cast<std::size_t>(pred[i])] == truth[i];
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(truth.size());
}

void lda_recovery(Outcome& o) {
    const auto t0 = Clock::now();
    constexpr int K = 4, kWords = 25, kDocs = 200, kLen = 50;
    Rng rng(7);
    std::vector<TokenizedPoem> docs;
    std::vector<int> truth;
    for (int d = 0; d < kDocs; ++d) {
        const int topic = static_cast<int>(rng.below(K));
        truth.push_back(topic);
        TokenList t;
        for (int i = 0; i < kLen; ++i) {
            // Mostly the document's own topic, sometimes any topic.
            const int from = rng.uniform() < 0.8 ? topic : static_cast<int>(rng.below(K));
            t.push_back("t" + std::to_string(from) + "w" + std::to_string(rng.below(kWords)));
        }
        docs.push_back(make_doc(std::move(t)));
    }
    const auto vocab = build_vocabulary(docs);
    const auto model = fit_lda(docs, vocab, LdaConfig{});
    std::vector<int> pred;
    double worst_row = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto row = doc_topic_vector(model, d);
        pred.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
        worst_row = std::max(worst_row, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
    for (int t = 0; t < K; ++t) {
        double s = 0.0;
        for (std::size_t w = 0; w < model.vocab_size; ++w) s += model.phi_at(t, w);
        worst_row = std::max(worst_row, std::abs(s - 1.0));
    }
    const double acc = best_permutation_accuracy(truth, pred, K);
    o.check(acc >= 0.95, "accuracy " + format_roundtrip(acc));
    o.check(worst_row <= 1e-9, "row sum error " + format_roundtrip(worst_row));

    // k = 1: theta is exactly 1 and phi is the smoothed unigram distribution.
    LdaConfig one;
    one.k = 1;
    const auto m1 = fit_lda(docs, vocab, one);
    std::vector<double> counts(vocab.size(), 0.0);
    double n = 0;
    for (const auto& d : docs) {
        for (const auto& tok : d.flat_tokens) {
            counts[*vocab.find(tok)] += 1;
            n += 1;
        }
    }
    bool exact = std::all_of(m1.theta.begin(), m1.theta.end(), [](double v) { return v == 1.0; });
    for (std::size_t w = 0; w < vocab.size(); ++w) {
        const double want = (counts[w] + one.beta) / (n + static_cast<double>(vocab.size()) * one.beta);
        exact = exact && std::abs(m1.phi_at(0, w) - want) <= 1e-15;
    }
    o.check(exact, "k=1 case not exact");
    const double secs = seconds_since(t0);
    o.check(secs < 60.0, "runtime " + format_roundtrip(secs) + " s");
    o.detail << (o.pass ? "" : "; ") << "accuracy " << acc << ", sweeps " << model.iterations_run << ", "
             << secs << " s";
}

void kmeans_criterion(Outcome& o) {
    const auto t0 = Clock::now();
    Rng rng(11);
    const std::vector<Point> centers = {{0, 0}, {10, 0}, {0, 10}, {10, 10}};
    std::vector<Point> pts;
    std::vector<int> truth;
    for (int c = 0; c < 4; ++c) {
        for (int i = 0; i < 50; ++i) {
            Point p = centers[static_cast<std::size_t>(c)];
            for (auto& x : p) x += 0.1 * rng.normal();
            pts.push_back(p);
            truth.push_back(c);
        }
    }
    const auto a = kmeans(pts, 4, 42);
    // Partition identity: same-cluster relation agrees on every pair.
    bool same = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            same = same && ((truth[i] == truth[j]) == (a.labels[i] == a.labels[j]));
        }
    }
    o.check(same, "blob partition differs");

    bool monotone = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng r(100 + s);
        std::vector<Point> data(80, Point(3));
        for (auto& p : data) {
            for (auto& x : p) x = r.uniform(-5, 5);
        }
        const auto res = kmeans(data, 4, s);
        for (std::size_t i = 1; i < res.inertia_trace.size(); ++i) {
            monotone = monotone && res.inertia_trace[i] <= res.inertia_trace[i - 1];
        }
    }
    o.check(monotone, "inertia increased");
    const double secs = seconds_since(t0);
    o.check(secs < 5.0, "runtime " + format_roundtrip(secs) + " s");
    o.detail << (o.pass ? "" : "; ") << secs << " s";
}

void pca_criterion(Outcome& o) {
    Rng rng(5);
    std::vector<Point> pts(30, Point(10));
    for (auto& p : pts) {
        for (auto& x : p) x = rng.normal();
    }
    const auto proj = pca_project(pts, 10);
    const auto ev = testing::jacobi_eigenvalues(testing::covariance(pts), 10);
    double worst_ev = 0.0, worst_orth = 0.0;
    for (std::size_t i = 0; i < 10; ++i) worst_ev = std::max(worst_ev, std::abs(proj.explained_variance[i] - ev[i]));
    for (std::size_t a = 0; a < 10; ++a) {
        for (std::size_t b = 0; b < 10; ++b) {
            double dot = 0.0;
            for (std::size_t j = 0; j < 10; ++j) dot += proj.components[a][j] * proj.components[b][j];
            worst_orth = std::max(worst_orth, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    o.check(worst_ev <= 1e-7, "eigenvalue error " + format_roundtrip(worst_ev));
    o.check(worst_orth <= 1e-9, "orthonormality error " + format_roundtrip(worst_orth));
    o.detail << (o.pass ? "" : "; ") << "eigenvalue error " << worst_ev << ", orthonormality error " << worst_orth;
}

void fusion_constants(Outcome& o) {
    PrepConfig prep;
    prep.stopwords = load_stopwords();
    const auto corpus = load_corpus(testing::fixture_corpus());
    const auto poems = preprocess_book(corpus.books.front(), prep);
    const auto vocab = build_vocabulary(poems);
    const auto lda = fit_lda(poems, vocab, LdaConfig{});
    const auto embedder = hash_provider(kDefaultEmbeddingDim, 42);

    std::vector<FusionInput> inputs;
    bool head_ok = true;
    for (std::size_t d = 0; d < poems.size(); ++d) {
        const auto theta = doc_topic_vector(lda, d);
        const auto emb = poem_embedding(poems[d], embedder);
        auto in = build_fusion_input(theta, emb.vector, kDefaultFusionAlpha, FusionShape{}, poems[d].poem_index);
        for (std::size_t t = 0; t < 4; ++t) head_ok = head_ok && in.values[t] == 15.0 * theta[t];
        inputs.push_back(std::move(in));
    }
    o.check(inputs.front().values.size() == 772, "input length " + std::to_string(inputs.front().values.size()));
    o.check(head_ok, "topic block is not 15*theta");

    const auto model = train_autoencoder(std::span<const FusionInput>(inputs), AutoencoderConfig{});
    const auto latent = encode(model, inputs.front());
    o.check(latent.vector.size() == 16, "latent length " + std::to_string(latent.vector.size()));
    o.check(model.loss_log.size() == 1000 && model.epochs == 1000, "epochs " + std::to_string(model.epochs));
    o.check(model.batch_size == 128, "batch " + std::to_string(model.batch_size));
    o.check(model.input_dim() == 772 && model.hidden_dim() == 16, "weight shapes");
    o.detail << (o.pass ? "" : "; ") << "input 772, latent " << latent.vector.size() << ", " << model.loss_log.size()
             << " epochs at batch " << model.batch_size;
}

void autoencoder_learning(Outcome& o) {
    const auto t0 = Clock::now();
    const auto data = testing::subspace_data(50, 772, 10, 3);
    const auto a = train_autoencoder(data, AutoencoderConfig{});
    const double ratio = a.loss_log.back() / a.loss_log.front();
    o.check(ratio <= 0.10, "final/initial loss " + format_roundtrip(ratio));

    bool monotone = true;
    double prev = INFINITY;
    for (std::size_t i = 0; i + 20 <= a.loss_log.size(); ++i) {
        const double avg = std::accumulate(a.loss_log.begin() + i, a.loss_log.begin() + i + 20, 0.0) / 20.0;
        monotone = monotone && avg <= prev;
        prev = avg;
    }
    o.check(monotone, "20-epoch moving average increased");

    const auto b = train_autoencoder(data, AutoencoderConfig{});
    o.check(a.encoder_weights == b.encoder_weights && a.decoder_weights == b.decoder_weights &&
                a.encoder_bias == b.encoder_bias && a.decoder_bias == b.decoder_bias,
            "weights differ between identical runs");
    const double secs = seconds_since(t0);
    o.check(secs < 120.0, "runtime " + format_roundtrip(secs) + " s");
    o.detail << (o.pass ? "" : "; ") << "final/initial " << ratio << ", " << secs << " s";
}

void end_to_end_determinism(Outcome& o) {
    const auto t0 = Clock::now();
    testing::TempDir work("ghazal_accept");
    std::vector<std::string> metas;
    for (const char* run : {"a", "b"}) {
        const auto out = work / run;
        const std::string cmd = std::string("\"") + GHAZAL_CLI + "\" report-all --corpus \"" +
                                testing::fixture_corpus().string() + "\" --hash-embeddings --out \"" + out.string() +
                                "\" > \"" + (work / (std::string(run) + ".log")).string() + "\" 2>&1";
        const int rc = std::system(cmd.c_str());
        o.check(rc == 0, std::string("run ") + run + " exited with " + std::to_string(rc));
        metas.push_back(fs::exists(out / "run.meta") ? read_file(out / "run.meta") : std::string());
    }
    // run.meta lists the SHA-256 of every artifact; compare them and the files themselves.
    o.check(!metas[0].empty() && metas[0] == metas[1], "run.meta differs");
    std::size_t artifacts = 0;
    bool files_equal = true;
    for (const auto& entry : fs::recursive_directory_iterator(work / "a")) {
        if (!entry.is_regular_file()) continue;
        ++artifacts;
        const auto rel = fs::relative(entry.path(), work / "a");
        files_equal = files_equal && fs::exists(work / "b" / rel) &&
                      read_file(entry.path()) == read_file(work / "b" / rel);
    }
    o.check(files_equal && artifacts > 1, "artifact bytes differ");
    const double secs = seconds_since(t0);
    o.check(secs < 60.0, "runtime " + format_roundtrip(secs) + " s");
    o.detail << (o.pass ? "" : "; ") << artifacts << " files identical, " << secs << " s";
}

void top5_bow(Outcome& o) {
    PrepConfig prep;
    prep.stopwords = load_stopwords();
    std::vector<TokenizedPoem> poems;
    for (const auto& book : load_corpus(testing::fixture_corpus()).books) {
        for (const auto& p : book.poems) poems.push_back(preprocess_poem(p, prep));
    }
    const auto vocab = build_vocabulary(poems);
    for (const auto& p : poems) {
        const auto fv = top_k_bow(p, vocab, 5);
        const auto tf = term_frequencies(p);
        int nonzero = 0;
        for (std::size_t i = 0; i < fv.values.size(); ++i) {
            if (fv.values[i] == 0) continue;
            ++nonzero;
            o.check(fv.values[i] == static_cast<double>(tf.at(vocab.term(i))), "entry is not the term frequency");
        }
        o.check(nonzero <= 5, "more than five nonzero entries");
    }

    // a:3, then five terms tied at 2 first seen in the order f, c, e, b, d; d must drop out.
    const std::vector<TokenizedPoem> tie = {make_doc({"f", "a", "c", "e", "b", "a", "d", "f", "c", "e", "b", "d", "a"})};
    const auto tv = build_vocabulary(tie);
    const auto fv = top_k_bow(tie[0], tv, 5);
    std::map<std::string, double> got;
    for (std::size_t i = 0; i < fv.values.size(); ++i) got[tv.term(i)] = fv.values[i];
    const std::map<std::string, double> want = {{"a", 3}, {"b", 2}, {"c", 2}, {"d", 0}, {"e", 2}, {"f", 2}};
    o.check(got == want, "tie fixture resolved wrongly");
    o.detail << (o.pass ? "" : "; ") << poems.size() << " poems checked";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"1 cosine oracle", cosine_oracle},
        {"2 trigram fidelity", trigram_fidelity},
        {"3 stop-word fidelity", stopword_fidelity},
        {"4 LDA recovery", lda_recovery},
        {"5 k-means", kmeans_criterion},
        {"6 PCA", pca_criterion},
        {"7 fusion constants", fusion_constants},
        {"8 autoencoder learning", autoencoder_learning},
        {"9 end-to-end determinism", end_to_end_determinism},
        {"10 top-5 bag of words", top5_bow},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail.str() << ")" << std::endl;
        failed += !o.pass;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
