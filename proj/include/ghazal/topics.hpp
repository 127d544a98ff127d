#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghazal/features.hpp"
#include "ghazal/rng.hpp"

namespace ghazal {

struct LdaConfig {
    int k = 4;
    std::optional<double> alpha;  // symmetric doc-topic prior; 50/k when unset
    double beta = 0.01;           // symmetric topic-word prior
    int max_sweeps = 1000;
    double ll_tolerance = 1e-4;  // relative change in log-likelihood
    int patience = 5;            // consecutive sweeps under tolerance
    std::uint64_t seed = 42;

    double effective_alpha() const { return alpha.value_or(50.0 / k); }
    void validate() const;
};

/// Fitted LDA state. theta is D x k and phi is k x V, both row-major.
struct TopicModel {
    int k = 0;
    std::size_t vocab_size = 0;
    std::size_t doc_count = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<std::vector<int>> assignments;
    std::vector<double> ll_trace;  // log-likelihood after each sweep

    double theta_at(std::size_t d, int t) const { return theta[d * static_cast<std::size_t>(k) + t]; }
    double phi_at(int t, std::size_t w) const { return phi[static_cast<std::size_t>(t) * vocab_size + w]; }
};

/// Collapsed Gibbs sampler over word-id documents.
///
/// Each document owns an RNG stream derived from (seed, document id), so a
/// document's draws do not depend on where it sits in the corpus. Sweeps visit
/// tokens in (document, position) order.
class GibbsSampler {
public:
    GibbsSampler(std::vector<std::vector<std::size_t>> docs, std::size_t vocab_size, int k,
                 double alpha, double beta, std::uint64_t seed);

    void sweep();

    /// Sum over tokens of log sum_t theta_dt phi_tw at the current estimates.
    double log_likelihood() const;

    std::vector<double> theta() const;
    std::vector<double> phi() const;

    int k() const { return k_; }
    std::size_t doc_count() const { return docs_.size(); }
    std::size_t vocab_size() const { return vocab_size_; }
    const std::vector<std::vector<std::size_t>>& docs() const { return docs_; }
    const std::vector<std::vector<int>>& assignments() const { return z_; }
    int doc_topic_count(std::size_t d, int t) const { return n_dk_[d * k_ + t]; }
    int topic_word_count(int t, std::size_t w) const { return n_kw_[t * vocab_size_ + w]; }
    int topic_count(int t) const { return n_k_[t]; }

private:
    std::vector<std::vector<std::size_t>> docs_;
    std::size_t vocab_size_;
    int k_;
    double alpha_;
    double beta_;
    std::vector<Rng> streams_;
    std::vector<std::vector<int>> z_;
    std::vector<int> n_dk_;
    std::vector<int> n_kw_;
    std::vector<int> n_k_;
    std::vector<double> weights_;
};

/// Map poems onto word ids. Throws Error(Data) for out-of-vocabulary tokens.
std::vector<std::vector<std::size_t>> encode_documents(std::span<const TokenizedPoem> poems,
                                                       const Vocabulary& vocab);

/// Throws Error(Data) on an empty corpus or out-of-vocabulary token.
TopicModel fit_lda(std::span<const TokenizedPoem> poems, const Vocabulary& vocab, const LdaConfig& config);

/// Throws Error(Usage) if `d` is out of range.
std::vector<double> doc_topic_vector(const TopicModel& model, std::size_t d);

/// `n` highest-probability term ids of topic `t`; ties keep vocabulary order.
std::vector<std::size_t> topic_top_word_ids(const TopicModel& model, int t, std::size_t n);
std::vector<std::string> topic_top_words(const TopicModel& model, const Vocabulary& vocab, int t, std::size_t n);

double log_likelihood(const TopicModel& model, std::span<const TokenizedPoem> poems, const Vocabulary& vocab);

/// Versioned text format: header lines then theta and phi rows.
std::string serialize_topic_model(const TopicModel& model);
TopicModel parse_topic_model(std::string_view text);

/// `poem_index,topic0,...` rows.
std::string theta_csv(const TopicModel& model, std::span<const int> poem_indices);

}  // namespace ghazal
