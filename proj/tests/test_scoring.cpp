#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pdd/error.hpp"
#include "pdd/scoring.hpp"

using namespace pdd;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Io;
}

LogprobRecord from_probs(std::vector<TokenId> ids, std::vector<double> probs, std::uint32_t V) {
    LogprobRecord r{"doc", {}, V, "test"};
    for (std::size_t i = 0; i < ids.size(); ++i)
        r.events.push_back(TokenEvent::from_logprob(static_cast<std::uint32_t>(i + 1), ids[i], std::log(probs[i])));
    return r;
}

LogprobRecord from_logprobs(std::vector<double> lps) {
    LogprobRecord r{"doc", {}, 1000, "test"};
    for (std::size_t i = 0; i < lps.size(); ++i)
        r.events.push_back(TokenEvent::from_logprob(static_cast<std::uint32_t>(i + 1), static_cast<TokenId>(i), lps[i]));
    return r;
}

}  // namespace

TEST_CASE("dcpdd on a hand-computed record") {
    // x = [A, B, A], p(x; M) = [0.5, 0.25, 0.9]; counts A:1, B:0, C:2 so
    // p(A; D') = 2/6 and p(B; D') = 1/6. The second A is not a first occurrence.
    auto table = FrequencyTable::from_counts({1, 0, 2});
    auto rec = from_probs({0, 1, 0}, {0.5, 0.25, 0.9}, 3);
    const double alpha_a = 0.5 * std::log(3.0);
    const double alpha_b = 0.25 * std::log(6.0);

    auto s = dcpdd_score(rec, {&table, 10.0});
    CHECK(s.value == doctest::Approx((alpha_a + alpha_b) / 2).epsilon(1e-12));
    CHECK(s.extras.at("fos_size") == 2);
    CHECK(s.extras.at("clipped") == 0);

    s = dcpdd_score(rec, {&table, 0.5});
    CHECK(s.value == doctest::Approx((0.5 + alpha_b) / 2).epsilon(1e-12));
    CHECK(s.extras.at("clipped") == 1);

    s = dcpdd_score(rec, {&table, 0.01});
    CHECK(s.value == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("dcpdd preconditions") {
    auto table = FrequencyTable::from_counts({1, 0, 2});
    auto rec = from_probs({0}, {0.5}, 4);
    CHECK(kind_of([&] { dcpdd_score(rec, {&table, 0.01}); }) == ErrorKind::VocabMismatch);
    CHECK(kind_of([&] { dcpdd_score(from_probs({}, {}, 3), {&table, 0.01}); }) == ErrorKind::EmptyRecord);
    CHECK(kind_of([&] { dcpdd_score(from_probs({0}, {0.5}, 3), {nullptr, 0.01}); }) == ErrorKind::Config);
    CHECK(kind_of([&] { dcpdd_score(from_probs({0}, {0.5}, 3), {&table, 0.0}); }) == ErrorKind::Config);
}

TEST_CASE("dcpdd matches the brute-force oracle") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        const auto V = static_cast<std::uint32_t>(2 + rng() % 60);
        auto table = oracle::random_table(rng, V, 50);
        auto rec = oracle::random_record(rng, V, 80);
        for (double a : {0.001, 0.01, 0.1, 1.0, 10.0})
            CHECK(dcpdd_score(rec, {&table, a}).value == oracle::dcpdd(rec, table, a));
    }
}

TEST_CASE("perplexity family") {
    auto uniform = from_probs({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}, 4);
    CHECK(perplexity(uniform) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(ppl_score(uniform).value == doctest::Approx(-4.0).epsilon(1e-14));

    auto ppl8 = from_probs({0, 1}, {0.125, 0.125}, 4);
    auto ppl2 = from_probs({0, 1}, {0.5, 0.5}, 4);
    CHECK(lowercase_score(ppl8, uniform, true).value == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(kind_of([&] { lowercase_score(ppl8, uniform, false); }) == ErrorKind::NotApplicable);

    auto ref4 = from_probs({0, 1}, {0.25, 0.25}, 4);
    CHECK(small_ref_score(ppl2, ref4).value == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(kind_of([&] { small_ref_score(ppl2, uniform); }) == ErrorKind::LengthMismatch);
    CHECK(kind_of([&] { perplexity(from_probs({}, {}, 4)); }) == ErrorKind::EmptyRecord);
}

TEST_CASE("zlib entropy is pinned") {
    // Frozen from zlib level 6, zlib container.
    CHECK(zlib_entropy_bits(std::string(1000, 'a')) == 136);
    CHECK(zlib_entropy_bits("hello") == 13 * 8);
    CHECK(zlib_entropy_bits("hello world") == 19 * 8);
    CHECK(zlib_entropy_bits("banana") == 12 * 8);
    CHECK(kind_of([] { zlib_entropy_bits(""); }) == ErrorKind::EmptyText);

    auto r = from_probs({0, 1}, {0.125, 0.125}, 4);
    auto s = compression_score(r, std::string(1000, 'a'));
    CHECK(s.value == doctest::Approx(-8.0 / 136.0).epsilon(1e-14));
    CHECK(s.extras.at("entropy_bits") == 136);
}

TEST_CASE("min-k and min-k++") {
    auto r = from_logprobs({-1, -2, -3, -4});
    CHECK(mink_score(r, 50).value == -3.5);
    CHECK(min_k_count(4, 50) == 2);
    CHECK(min_k_count(3, 20) == 1);
    CHECK(min_k_count(10, 100) == 10);
    CHECK(kind_of([] { min_k_count(4, 0); }) == ErrorKind::Config);

    // normalized values (lp - mu) / sigma = [-2, 0, 1, 3]
    LogprobRecord pp{"doc", {}, 10, "test"};
    const double lps[] = {-5.0, -3.0, -2.0, -1.0};
    const double norm[] = {-2.0, 0.0, 1.0, 3.0};
    for (int i = 0; i < 4; ++i)
        pp.events.push_back(TokenEvent::from_logprob(i + 1, i, lps[i], DistStats{lps[i] - norm[i], 1.0}));
    CHECK(minkpp_score(pp, 50).value == doctest::Approx(-1.0).epsilon(1e-14));

    CHECK(kind_of([&] { minkpp_score(r); }) == ErrorKind::NotApplicable);

    // sigma = 0 is floored instead of dividing by zero
    LogprobRecord flat{"doc", {}, 10, "test"};
    flat.events.push_back(TokenEvent::from_logprob(1, 0, std::log(0.25), DistStats{std::log(0.25), 0.0}));
    CHECK(minkpp_score(flat).value == 0.0);
}

TEST_CASE("min-k at 100% is the mean logprob and recovers perplexity") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 300; ++t) {
        auto rec = oracle::random_record(rng, 100, 200);
        double mean = 0.0;
        for (const auto& e : rec.events) mean += e.logprob;
        mean /= static_cast<double>(rec.size());
        const double v = mink_score(rec, 100).value;
        CHECK(std::abs(v - mean) <= 1e-9);
        CHECK(std::abs(std::exp(-v) - perplexity(rec)) <= 1e-9 * perplexity(rec));
    }
}

TEST_CASE("beta is monotone in the clip bound") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 200; ++t) {
        const auto V = static_cast<std::uint32_t>(2 + rng() % 40);
        auto table = oracle::random_table(rng, V, 30);
        auto rec = oracle::random_record(rng, V, 60);
        double prev = -1.0;
        for (double a : {0.001, 0.01, 0.1, 1.0, 10.0}) {
            const double b = dcpdd_score(rec, {&table, a}).value;
            CHECK(b >= prev);
            prev = b;
        }
        // a above every alpha: no clipping
        const auto s = dcpdd_score(rec, {&table, 1e6});
        CHECK(s.extras.at("clipped") == 0);
        CHECK(s.value == oracle::dcpdd(rec, table, std::numeric_limits<double>::infinity()));
    }
}

TEST_CASE("decision threshold is inclusive") {
    DetectionScore s{"d", Method::DcPdd, 0.75, {}};
    CHECK(decide(s, 0.5).is_member);
    s.value = 0.5;
    CHECK(decide(s, 0.5).is_member);
    s.value = 0.4;
    CHECK_FALSE(decide(s, 0.5).is_member);
}

TEST_CASE("method names") {
    for (auto m : {Method::DcPdd, Method::Ppl, Method::Lowercase, Method::Compression, Method::SmallRef, Method::MinK,
                   Method::MinKpp})
        CHECK(parse_method(to_string(m)) == m);
    CHECK(parse_method("zlib") == Method::Compression);
    CHECK(kind_of([] { parse_method("bogus"); }) == ErrorKind::Config);
}
