#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ghazal/corpus.hpp"
#include "ghazal/error.hpp"
#include "ghazal/features.hpp"
#include "test_util.hpp"

namespace ghazal {
namespace {

TokenizedPoem make_poem(std::vector<TokenList> verses, int index = 0) {
    TokenizedPoem p;
    p.poem_index = index;
    for (const auto& v : verses) p.flat_tokens.insert(p.flat_tokens.end(), v.begin(), v.end());
    p.verses = std::move(verses);
    return p;
}

std::vector<TokenizedPoem> fixture_poems() {
    PrepConfig cfg;
    cfg.stopwords = load_stopwords();
    std::vector<TokenizedPoem> out;
    for (const auto& book : load_corpus(testing::fixture_corpus()).books) {
        for (const auto& poem : book.poems) out.push_back(preprocess_poem(poem, cfg));
    }
    return out;
}

// Oracle: top-k by (count desc, first occurrence asc), computed by exhaustive ranking.
std::map<std::string, double> brute_top_k(const TokenList& tokens, std::size_t k) {
    std::map<std::string, std::pair<int, std::size_t>> stats;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto [it, fresh] = stats.try_emplace(tokens[i], 0, i);
        ++it->second.first;
    }
    std::map<std::string, double> kept;
    for (const auto& [term, s] : stats) {
        std::size_t better = 0;
        for (const auto& [other, o] : stats) {
            if (o.first > s.first || (o.first == s.first && o.second < s.second)) ++better;
        }
        if (better < k) kept[term] = s.first;
    }
    return kept;
}

TEST(Vocabulary, FirstOccurrenceOrder) {
    const std::vector<TokenizedPoem> poems = {make_poem({{"a", "b"}}), make_poem({{"b", "c"}})};
    EXPECT_EQ(build_vocabulary(poems).terms(), (std::vector<std::string>{"a", "b", "c"}));
    const std::vector<TokenizedPoem> single = {make_poem({{"x", "x", "x"}})};
    EXPECT_EQ(build_vocabulary(single).terms(), (std::vector<std::string>{"x"}));
}

TEST(Vocabulary, EmptyCorpusIsAnError) {
    const std::vector<TokenizedPoem> poems = {make_poem({{}}), make_poem({})};
    EXPECT_THROW(build_vocabulary(poems), Error);
    EXPECT_THROW(build_vocabulary(std::vector<TokenizedPoem>{}), Error);
}

TEST(Vocabulary, FixtureSizeMatchesDistinctCountAndRoundTrips) {
    const auto poems = fixture_poems();
    std::set<std::string> distinct;
    for (const auto& p : poems) distinct.insert(p.flat_tokens.begin(), p.flat_tokens.end());
    const auto vocab = build_vocabulary(poems);
    EXPECT_EQ(vocab.size(), distinct.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) EXPECT_EQ(vocab.find(vocab.term(i)), i);
}

TEST(TermFrequencies, Counts) {
    EXPECT_EQ(term_frequencies(make_poem({{"a", "b", "a"}})), (TermCounts{{"a", 2}, {"b", 1}}));
    EXPECT_TRUE(term_frequencies(make_poem({})).empty());
}

TEST(TermFrequencies, FixtureMatchesIndependentTally) {
    for (const auto& p : fixture_poems()) {
        const auto counts = term_frequencies(p);
        std::size_t sum = 0;
        for (const auto& [term, c] : counts) {
            sum += c;
            EXPECT_EQ(c, static_cast<std::size_t>(std::count(p.flat_tokens.begin(), p.flat_tokens.end(), term)));
        }
        EXPECT_EQ(sum, p.flat_tokens.size());
    }
}

TEST(TopKBow, RankRule) {
    // counts a:5 b:4 c:3 d:2 e:2 f:1
    TokenList t;
    for (auto [w, n] : std::vector<std::pair<std::string, int>>{{"a", 5}, {"b", 4}, {"c", 3}, {"d", 2}, {"e", 2}, {"f", 1}}) {
        for (int i = 0; i < n; ++i) t.push_back(w);
    }
    const std::vector<TokenizedPoem> poems = {make_poem({t})};
    const auto vocab = build_vocabulary(poems);
    const auto fv = top_k_bow(poems[0], vocab);
    EXPECT_EQ(fv.values, (std::vector<double>{5, 4, 3, 2, 2, 0}));
}

TEST(TopKBow, TiesResolveByFirstOccurrence) {
    // a:3 and five terms at count 2, first seen in the order f, c, e, b, d.
    const TokenList t = {"f", "a", "c", "e", "b", "a", "d", "f", "c", "e", "b", "d", "a"};
    const std::vector<TokenizedPoem> poems = {make_poem({t})};
    const auto vocab = build_vocabulary(poems);
    const auto fv = top_k_bow(poems[0], vocab, 5);
    const auto expected = brute_top_k(t, 5);
    ASSERT_EQ(expected.size(), 5u);
    EXPECT_EQ(expected.count("d"), 0u);  // last of the tied terms to appear
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto it = expected.find(vocab.term(i));
        EXPECT_EQ(fv.values[i], it == expected.end() ? 0.0 : it->second) << vocab.term(i);
    }
}

TEST(TopKBow, FewerThanKDistinct) {
    const std::vector<TokenizedPoem> poems = {make_poem({{"x", "y", "x"}})};
    const auto fv = top_k_bow(poems[0], build_vocabulary(poems), 5);
    EXPECT_EQ(std::count_if(fv.values.begin(), fv.values.end(), [](double v) { return v != 0; }), 2);
}

TEST(TopKBow, ErrorsOnOovAndZeroK) {
    const std::vector<TokenizedPoem> poems = {make_poem({{"x"}})};
    const auto vocab = build_vocabulary(poems);
    EXPECT_THROW(top_k_bow(make_poem({{"unknown"}}), vocab), Error);
    EXPECT_THROW(top_k_bow(poems[0], vocab, 0), Error);
}

TEST(TopKBow, FixturePropertyAgainstOracle) {
    const auto poems = fixture_poems();
    const auto vocab = build_vocabulary(poems);
    for (const auto& p : poems) {
        const auto fv = top_k_bow(p, vocab, 5);
        const auto tf = term_frequencies(p);
        const auto expected = brute_top_k(p.flat_tokens, 5);
        int nonzero = 0;
        for (std::size_t i = 0; i < vocab.size(); ++i) {
            if (fv.values[i] == 0) continue;
            ++nonzero;
            EXPECT_EQ(fv.values[i], static_cast<double>(tf.at(vocab.term(i))));
            EXPECT_EQ(expected.count(vocab.term(i)), 1u);
        }
        EXPECT_LE(nonzero, 5);
        EXPECT_EQ(static_cast<std::size_t>(nonzero), expected.size());
    }
}

TEST(Trigrams, VerseScoped) {
    EXPECT_EQ(extract_trigrams(make_poem({{"a", "b", "c"}, {"d", "e", "f"}})),
              (std::vector<Trigram>{{"a", "b", "c"}, {"d", "e", "f"}}));
    EXPECT_TRUE(extract_trigrams(make_poem({{"a", "b"}})).empty());
    const auto tri = extract_trigrams(make_poem({{"لبان", "سایه", "پرسش", "مرموز"}}));
    EXPECT_NE(std::find(tri.begin(), tri.end(), Trigram{"سایه", "پرسش", "مرموز"}), tri.end());
}

TEST(Trigrams, CountPerPoemFormula) {
    for (const auto& p : fixture_poems()) {
        std::size_t expected = 0;
        for (const auto& v : p.verses) expected += v.size() >= 2 ? v.size() - 2 : 0;
        EXPECT_EQ(extract_trigrams(p).size(), expected);
    }
}

TEST(TrigramBow, Counts) {
    const std::vector<TokenizedPoem> poems = {make_poem({{"a", "b", "c"}, {"a", "b", "c"}}), make_poem({{"x", "y"}})};
    const auto vocab = build_trigram_vocabulary(poems);
    EXPECT_EQ(trigram_bow(poems[0], vocab).values, (std::vector<double>{2}));
    EXPECT_EQ(trigram_bow(poems[1], vocab).values, (std::vector<double>{0}));
    EXPECT_THROW(trigram_bow(make_poem({{"p", "q", "r"}}), vocab), Error);
}

TEST(TrigramBow, FixtureColumnSumsMatchGlobalTally) {
    const auto poems = fixture_poems();
    const auto vocab = build_trigram_vocabulary(poems);
    std::map<Trigram, double> tally;
    for (const auto& p : poems) {
        for (const auto& v : p.verses) {
            for (std::size_t i = 0; i + 2 < v.size(); ++i) tally[{v[i], v[i + 1], v[i + 2]}] += 1;
        }
    }
    std::vector<double> sums(vocab.size(), 0.0);
    for (const auto& p : poems) {
        const auto fv = trigram_bow(p, vocab);
        for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += fv.values[j];
    }
    ASSERT_EQ(tally.size(), vocab.size());
    for (std::size_t j = 0; j < vocab.size(); ++j) EXPECT_EQ(sums[j], tally.at(vocab.term(j)));
}

TEST(Cosine, Examples) {
    const std::vector<double> e1{1, 0}, e2{0, 1}, p{2, 0}, q{4, 0};
    EXPECT_EQ(cosine_similarity(e1, e2).value, 0.0);
    EXPECT_DOUBLE_EQ(cosine_similarity(p, q).value, 1.0);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    // Oracle by hand: 1*4 + 2*5 + 3*6 = 32; |a|^2 = 14; |b|^2 = 77.
    const long double expected = 32.0L / std::sqrt(14.0L * 77.0L);
    EXPECT_NEAR(cosine_similarity(a, b).value, static_cast<double>(expected), 1e-15);
    EXPECT_NEAR(cosine_similarity(a, b).value, 0.974632, 1e-6);
}

TEST(Cosine, ZeroVectorIsDegenerate) {
    const std::vector<double> z{0, 0}, a{1, 1};
    const auto r = cosine_similarity(z, a);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.degenerate);
    EXPECT_FALSE(cosine_similarity(a, a).degenerate);
}

TEST(Cosine, LengthMismatch) {
    const std::vector<double> a{1, 2}, b{1, 2, 3};
    EXPECT_THROW(cosine_similarity(a, b), Error);
}

TEST(Cosine, ScaleInvarianceAndRange) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-5, 5), s(0.01, 100);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + trial % 17), b(a.size());
        for (auto& x : a) x = u(gen);
        for (auto& x : b) x = u(gen);
        const double c = s(gen);
        std::vector<double> ca(a);
        for (auto& x : ca) x *= c;
        const double base = cosine_similarity(a, b).value;
        EXPECT_NEAR(cosine_similarity(ca, b).value, base, 1e-12);
        EXPECT_GE(base, -1.0);
        EXPECT_LE(base, 1.0);
    }
}

TEST(SimilarityMatrix, SmallCases) {
    const std::vector<FeatureVector> one = {{0, {3, 4}}};
    const auto m1 = similarity_matrix(one);
    EXPECT_EQ(m1.values, (std::vector<double>{1}));
    const std::vector<FeatureVector> two = {{0, {1, 0}}, {1, {0, 1}}};
    EXPECT_EQ(similarity_matrix(two).values, (std::vector<double>{1, 0, 0, 1}));
    const std::vector<FeatureVector> zero = {{0, {0, 0}}, {1, {0, 1}}};
    const auto mz = similarity_matrix(zero);
    EXPECT_EQ(mz.at(0, 0), 0.0);
    EXPECT_TRUE(mz.zero_rows[0]);
}

TEST(SimilarityMatrix, MatchesBruteForceDoubleLoop) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0, 3);
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 5; ++i) {
        FeatureVector fv{i, std::vector<double>(9)};
        for (auto& x : fv.values) x = u(gen);
        vs.push_back(fv);
    }
    const auto m = similarity_matrix(vs);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            long double dot = 0, na = 0, nb = 0;
            for (std::size_t d = 0; d < 9; ++d) {
                dot += static_cast<long double>(vs[i].values[d]) * vs[j].values[d];
                na += static_cast<long double>(vs[i].values[d]) * vs[i].values[d];
                nb += static_cast<long double>(vs[j].values[d]) * vs[j].values[d];
            }
            EXPECT_NEAR(m.at(i, j), static_cast<double>(dot / std::sqrt(na * nb)), 1e-12);
            EXPECT_EQ(m.at(i, j), m.at(j, i));
            EXPECT_GE(m.at(i, j), 0.0);
        }
    }
}

TEST(Csv, SimilarityAndFeatureLayout) {
    const std::vector<FeatureVector> vs = {{3, {1, 0}}, {7, {1, 1}}};
    const auto csv = similarity_csv(similarity_matrix(vs));
    EXPECT_EQ(csv, ",3,7\n3,1,0.707106781\n7,0.707106781,1\n");
    const std::vector<std::string> labels = {"x", "y"};
    EXPECT_EQ(feature_csv(vs, labels), "term,3,7\nx,1,1\ny,0,1\n");
}

}  // namespace
}  // namespace ghazal
