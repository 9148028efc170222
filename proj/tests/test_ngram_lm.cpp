#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "pdd/error.hpp"
#include "pdd/ngram_lm.hpp"
#include "pdd/providers.hpp"
#include "pdd/synthetic.hpp"

using namespace pdd;

TEST_CASE("bigram counts and probabilities") {
    std::vector<Document> corpus = {{"d0", "a b a b"}};
    auto m = NGramModel::train(corpus, 2, Vocabulary({"a", "b"}), Scheme::Whitespace);
    const NGramModel::Context ctx_a = {0};
    REQUIRE(m.contexts().count(ctx_a));
    CHECK(m.contexts().at(ctx_a).successors.at(1) == 2);
    CHECK(m.contexts().at(ctx_a).total == 2);
    const TokenId a = 0;
    CHECK(m.next_token_prob(std::span(&a, 1), 1) == 0.75);
    CHECK(m.manifest() == std::set<std::string>{"d0"});

    // unseen context -> uniform
    const TokenId b = 1;
    auto m2 = NGramModel::train(std::vector<Document>{{"d", "a a"}}, 2, Vocabulary({"a", "b"}), Scheme::Whitespace);
    CHECK(m2.next_token_prob(std::span(&b, 1), 0) == 0.5);
    NGramModel empty(2, Vocabulary({"a", "b"}));
    CHECK(empty.next_token_prob(std::span(&a, 1), 1) == 0.5);
}

TEST_CASE("context totals equal successor sums") {
    SyntheticCorpus gen(1);
    auto docs = gen.documents(50, "d");
    auto vocab = default_vocabulary(docs);
    for (unsigned order : {1u, 2u, 3u}) {
        auto m = NGramModel::train(docs, order, vocab, Scheme::Whitespace);
        for (const auto& [ctx, stats] : m.contexts()) {
            CHECK(ctx.size() == order - 1);
            std::uint64_t s = 0;
            for (const auto& [_, c] : stats.successors) s += c;
            CHECK(s == stats.total);
        }
    }
}

TEST_CASE("conditional distributions sum to one") {
    SyntheticCorpus gen(2);
    auto docs = gen.documents(40, "d");
    auto vocab = default_vocabulary(docs);
    auto m = NGramModel::train(docs, 2, vocab, Scheme::Whitespace);
    std::mt19937_64 rng(4);
    std::vector<NGramModel::Context> contexts;
    for (const auto& [ctx, _] : m.contexts()) contexts.push_back(ctx);
    for (int t = 0; t < 100; ++t) {
        NGramModel::Context ctx = t % 2 ? contexts[rng() % contexts.size()]
                                        : NGramModel::Context{static_cast<TokenId>(rng() % vocab.size())};
        double sum = 0.0;
        for (TokenId z = 0; z < m.vocab_size(); ++z) sum += m.next_token_prob(ctx, z);
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("dist stats") {
    NGramModel uniform(2, Vocabulary({"a", "b", "c", "d"}));
    const TokenId a = 0;
    auto s = uniform.dist_stats(std::span(&a, 1));
    CHECK(s.mu == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(s.sigma == doctest::Approx(0.0));

    // "a b a b": P(.|a) = (0.25, 0.75)
    auto m = NGramModel::train(std::vector<Document>{{"d0", "a b a b"}}, 2, Vocabulary({"a", "b"}),
                               Scheme::Whitespace);
    s = m.dist_stats(std::span(&a, 1));
    const double mu = 0.75 * std::log(0.75) + 0.25 * std::log(0.25);
    const double var = 0.75 * std::pow(std::log(0.75) - mu, 2) + 0.25 * std::pow(std::log(0.25) - mu, 2);
    CHECK(s.mu == doctest::Approx(mu).epsilon(1e-14));
    CHECK(s.sigma == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

    // permuting ids leaves sigma unchanged
    auto swapped = NGramModel::train(std::vector<Document>{{"d0", "a b a b"}}, 2, Vocabulary({"b", "a"}),
                                     Scheme::Whitespace);
    const TokenId a2 = 1;
    CHECK(swapped.dist_stats(std::span(&a2, 1)).sigma == doctest::Approx(s.sigma).epsilon(1e-14));
}

TEST_CASE("dist stats agree with a full-vocabulary sweep") {
    SyntheticCorpus gen(3);
    auto docs = gen.documents(60, "d");
    auto vocab = default_vocabulary(docs);
    auto m = NGramModel::train(docs, 2, vocab, Scheme::Whitespace);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        NGramModel::Context ctx{static_cast<TokenId>(rng() % vocab.size())};
        auto fast = m.dist_stats(ctx);
        auto slow = oracle::brute_dist_stats(m, ctx);
        CHECK(std::abs(fast.mu - slow.mu) <= 1e-9);
        CHECK(std::abs(fast.sigma - slow.sigma) <= 1e-9);
        CHECK(fast.sigma >= 0.0);
    }
}

TEST_CASE("oracle records carry exact probabilities") {
    SyntheticCorpus gen(4);
    auto docs = gen.documents(30, "d");
    auto vocab = default_vocabulary(docs);
    auto m = NGramModel::train(docs, 3, vocab, Scheme::Whitespace);
    for (const auto& d : docs) {
        auto rec = fetch_oracle(d.doc_id, d.text, m, Scheme::Whitespace);
        auto ids = tokenize(d.text, vocab, Scheme::Whitespace);
        REQUIRE(rec.size() == ids.size());
        CHECK(rec.vocab_size == vocab.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto ctx = m.context_at(ids, i);
            CHECK(rec.events[i].position == i + 1);
            CHECK(rec.events[i].token_id == ids[i]);
            CHECK(rec.events[i].logprob == std::log(m.next_token_prob(ctx, ids[i])));
            REQUIRE(rec.events[i].dist);
            CHECK(*rec.events[i].dist == m.dist_stats(ctx));
        }
    }
}

TEST_CASE("training is order independent and round trips") {
    SyntheticCorpus gen(5);
    auto docs = gen.documents(40, "d");
    auto vocab = default_vocabulary(docs);
    auto m = NGramModel::train(docs, 2, vocab, Scheme::Whitespace);
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(6));
    CHECK(NGramModel::train(shuffled, 2, vocab, Scheme::Whitespace) == m);

    const auto path = std::filesystem::temp_directory_path() / "pdd_test_model.ngm";
    save(m, path);
    CHECK(load_model(path) == m);
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".manifest.jsonl");
}

TEST_CASE("context padding") {
    Vocabulary v({"a", "b", "<s>"}, 2);
    NGramModel m(3, v);
    TokenSequence ids = {0, 1, 0};
    CHECK(m.context_at(ids, 0) == NGramModel::Context{2, 2});
    CHECK(m.context_at(ids, 1) == NGramModel::Context{2, 0});
    CHECK(m.context_at(ids, 2) == NGramModel::Context{0, 1});
    const TokenId bad = 3;
    CHECK_THROWS_AS(m.next_token_prob({}, bad), Error);
}
