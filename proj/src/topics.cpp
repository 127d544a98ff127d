#include "ghazal/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"

namespace ghazal {

void LdaConfig::validate() const {
    if (k < 1) fail_usage("lda: k must be >= 1");
    if (effective_alpha() <= 0.0 || beta <= 0.0) fail_usage("lda: priors must be > 0");
    if (max_sweeps < 1) fail_usage("lda: max_sweeps must be >= 1");
    if (patience < 1) fail_usage("lda: patience must be >= 1");
    if (!(ll_tolerance >= 0.0)) fail_usage("lda: ll_tolerance must be >= 0");
}

GibbsSampler::GibbsSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size, int k,
                           double alpha, double beta, std::uint64_t seed)
    : docs_(std::move(docs)),
      vocab_size_(vocab_size),
      k_(k),
      alpha_(alpha),
      beta_(beta),
      n_dk_(docs_.size() * k, 0),
      n_kw_(static_cast<std::size_t>(k) * vocab_size, 0),
      n_k_(k, 0),
      weights_(k, 0.0) {
    streams_.reserve(docs_.size());
    z_.resize(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        streams_.push_back(Rng::derived(seed, d));
        z_[d].resize(docs_[d].size());
        for (std::size_t i = 0; i < docs_[d].size(); ++i) {
            const auto w = docs_[d][i];
            const int t = static_cast<int>(streams_[d].below(static_cast<std::uint64_t>(k_)));
            z_[d][i] = t;
            ++n_dk_[d * k_ + t];
            ++n_kw_[t * vocab_size_ + w];
            ++n_k_[t];
        }
    }
}

void GibbsSampler::sweep() {
    const double vbeta = static_cast<double>(vocab_size_) * beta_;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        auto& rng = streams_[d];
        int* doc_counts = &n_dk_[d * k_];
        for (std::size_t i = 0; i < docs_[d].size(); ++i) {
            const auto w = docs_[d][i];
            int t = z_[d][i];
            --doc_counts[t];
            --n_kw_[t * vocab_size_ + w];
            --n_k_[t];

            double total = 0.0;
            for (int c = 0; c < k_; ++c) {
                total += (doc_counts[c] + alpha_) * (n_kw_[c * vocab_size_ + w] + beta_) / (n_k_[c] + vbeta);
                weights_[c] = total;
            }
            const double u = rng.uniform() * total;
            t = k_ - 1;
            for (int c = 0; c < k_; ++c) {
                if (u < weights_[c]) {
                    t = c;
                    break;
                }
            }

            z_[d][i] = t;
            ++doc_counts[t];
            ++n_kw_[t * vocab_size_ + w];
            ++n_k_[t];
        }
    }
}

std::vector<double> GibbsSampler::theta() const {
    std::vector<double> theta(docs_.size() * k_);
    const double kalpha = k_ * alpha_;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        const double denom = static_cast<double>(docs_[d].size()) + kalpha;
        for (int t = 0; t < k_; ++t) theta[d * k_ + t] = (n_dk_[d * k_ + t] + alpha_) / denom;
    }
    return theta;
}

std::vector<double> GibbsSampler::phi() const {
    std::vector<double> phi(static_cast<std::size_t>(k_) * vocab_size_);
    const double vbeta = static_cast<double>(vocab_size_) * beta_;
    for (int t = 0; t < k_; ++t) {
        const double denom = n_k_[t] + vbeta;
        for (std::size_t w = 0; w < vocab_size_; ++w) {
            phi[t * vocab_size_ + w] = (n_kw_[t * vocab_size_ + w] + beta_) / denom;
        }
    }
    return phi;
}

double GibbsSampler::log_likelihood() const {
    const auto th = theta();
    const auto ph = phi();
    double ll = 0.0;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
        for (const auto w : docs_[d]) {
            double p = 0.0;
            for (int t = 0; t < k_; ++t) p += th[d * k_ + t] * ph[t * vocab_size_ + w];
            ll += std::log(p);
        }
    }
    return ll;
}

std::vector<std::vector<std::size_t>> encode_documents(std::span<const TokenizedPoem> poems,
                                                       const Vocabulary& vocab) {
    std::vector<std::vector<std::size_t>> docs;
    docs.reserve(poems.size());
    for (const auto& poem : poems) {
        auto& ids = docs.emplace_back();
        ids.reserve(poem.flat_tokens.size());
        for (const auto& token : poem.flat_tokens) {
            const auto pos = vocab.find(token);
            if (!pos) fail_data("lda: token out of vocabulary: " + token);
            ids.push_back(*pos);
        }
    }
    return docs;
}

TopicModel fit_lda(std::span<const TokenizedPoem> poems, const Vocabulary& vocab, const LdaConfig& config) {
    config.validate();
    auto docs = encode_documents(poems, vocab);
    std::size_t total = 0;
    for (const auto& d : docs) total += d.size();
    if (docs.empty() || total == 0) fail_data("lda: empty corpus");

    const double alpha = config.effective_alpha();
    GibbsSampler sampler(std::move(docs), vocab.size(), config.k, alpha, config.beta, config.seed);

    TopicModel model;
    model.k = config.k;
    model.vocab_size = vocab.size();
    model.doc_count = sampler.doc_count();
    model.alpha = alpha;
    model.beta = config.beta;
    model.seed = config.seed;

    int streak = 0;
    double prev = sampler.log_likelihood();
    for (int s = 0; s < config.max_sweeps; ++s) {
        sampler.sweep();
        const double ll = sampler.log_likelihood();
        if (!std::isfinite(ll)) fail_numeric("lda: non-finite log-likelihood at sweep " + std::to_string(s + 1));
        model.ll_trace.push_back(ll);
        model.iterations_run = s + 1;
        const double rel = std::abs(ll - prev) / std::max(std::abs(prev), 1e-300);
        streak = rel < config.ll_tolerance ? streak + 1 : 0;
        prev = ll;
        if (streak >= config.patience) break;
    }

    model.theta = sampler.theta();
    model.phi = sampler.phi();
    model.assignments = sampler.assignments();
    return model;
}

std::vector<double> doc_topic_vector(const TopicModel& model, std::size_t d) {
    if (d >= model.doc_count) {
        fail_usage("doc_topic_vector: document " + std::to_string(d) + " out of range (D=" +
                   std::to_string(model.doc_count) + ")");
    }
    const auto first = model.theta.begin() + static_cast<std::ptrdiff_t>(d * model.k);
    return {first, first + model.k};
}

std::vector<std::size_t> topic_top_word_ids(const TopicModel& model, int t, std::size_t n) {
    if (t < 0 || t >= model.k) fail_usage("topic_top_words: topic " + std::to_string(t) + " out of range");
    if (n == 0) fail_usage("topic_top_words: n must be >= 1");
    std::vector<std::size_t> ids(model.vocab_size);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::size_t a, std::size_t b) { return model.phi_at(t, a) > model.phi_at(t, b); });
    ids.resize(std::min(n, ids.size()));
    return ids;
}

std::vector<std::string> topic_top_words(const TopicModel& model, const Vocabulary& vocab, int t, std::size_t n) {
    std::vector<std::string> words;
    for (const auto id : topic_top_word_ids(model, t, n)) words.push_back(vocab.term(id));
    return words;
}

double log_likelihood(const TopicModel& model, std::span<const TokenizedPoem> poems, const Vocabulary& vocab) {
    const auto docs = encode_documents(poems, vocab);
    if (docs.size() != model.doc_count) fail_usage("log_likelihood: document count mismatch");
    double ll = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto w : docs[d]) {
            double p = 0.0;
            for (int t = 0; t < model.k; ++t) p += model.theta_at(d, t) * model.phi_at(t, w);
            ll += std::log(p);
        }
    }
    return ll;
}

namespace {

constexpr std::string_view kModelMagic = "ghazal-lda 1";

void append_row(std::string& out, std::span<const double> row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ' ';
        out += format_roundtrip(row[i]);
    }
    out += '\n';
}

}  // namespace

std::string serialize_topic_model(const TopicModel& model) {
    std::string out;
    out += kModelMagic;
    out += '\n';
    out += "k " + std::to_string(model.k) + '\n';
    out += "vocab " + std::to_string(model.vocab_size) + '\n';
    out += "docs " + std::to_string(model.doc_count) + '\n';
    out += "alpha " + format_roundtrip(model.alpha) + '\n';
    out += "beta " + format_roundtrip(model.beta) + '\n';
    out += "seed " + std::to_string(model.seed) + '\n';
    out += "iterations " + std::to_string(model.iterations_run) + '\n';
    out += "theta\n";
    for (std::size_t d = 0; d < model.doc_count; ++d) {
        append_row(out, std::span(model.theta).subspan(d * model.k, model.k));
    }
    out += "phi\n";
    for (int t = 0; t < model.k; ++t) {
        append_row(out, std::span(model.phi).subspan(t * model.vocab_size, model.vocab_size));
    }
    return out;
}

TopicModel parse_topic_model(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    auto next = [&]() -> std::string_view {
        if (i >= lines.size()) fail_data("topic model: truncated file");
        return lines[i++];
    };
    auto field = [&](std::string_view key) -> std::string_view {
        const auto f = split_fields(next());
        if (f.size() != 2 || f[0] != key) fail_data("topic model: expected '" + std::string(key) + " <value>'");
        return f[1];
    };
    if (next() != kModelMagic) fail_data("topic model: bad header");

    TopicModel m;
    m.k = static_cast<int>(parse_integer(field("k"), "topic model k"));
    m.vocab_size = static_cast<std::size_t>(parse_integer(field("vocab"), "topic model vocab"));
    m.doc_count = static_cast<std::size_t>(parse_integer(field("docs"), "topic model docs"));
    m.alpha = parse_double(field("alpha"), "topic model alpha");
    m.beta = parse_double(field("beta"), "topic model beta");
    m.seed = static_cast<std::uint64_t>(parse_integer(field("seed"), "topic model seed"));
    m.iterations_run = static_cast<int>(parse_integer(field("iterations"), "topic model iterations"));
    if (m.k < 1) fail_data("topic model: k must be >= 1");

    auto read_rows = [&](std::string_view label, std::size_t rows, std::size_t cols, std::vector<double>& dst) {
        if (next() != label) fail_data("topic model: expected section '" + std::string(label) + "'");
        dst.reserve(rows * cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto f = split_fields(next());
            if (f.size() != cols) fail_data("topic model: row arity mismatch in " + std::string(label));
            for (const auto v : f) dst.push_back(parse_double(v, "topic model value"));
        }
    };
    read_rows("theta", m.doc_count, static_cast<std::size_t>(m.k), m.theta);
    read_rows("phi", static_cast<std::size_t>(m.k), m.vocab_size, m.phi);
    return m;
}

std::string theta_csv(const TopicModel& model, std::span<const int> poem_indices) {
    if (poem_indices.size() != model.doc_count) fail_usage("theta_csv: index count != document count");
    std::string out = "poem_index";
    for (int t = 0; t < model.k; ++t) out += ",topic" + std::to_string(t);
    out += '\n';
    for (std::size_t d = 0; d < model.doc_count; ++d) {
        out += std::to_string(poem_indices[d]);
        for (int t = 0; t < model.k; ++t) out += "," + format_significant(model.theta_at(d, t));
        out += '\n';
    }
    return out;
}

}  // namespace ghazal
