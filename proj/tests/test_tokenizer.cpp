#include <doctest.h>

#include <filesystem>
#include <random>

#include "pdd/error.hpp"
#include "pdd/tokenizer.hpp"

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

}  // namespace

TEST_CASE("whitespace segmentation") {
    Vocabulary v({"a", "b"});
    CHECK(tokenize("a b a", v, Scheme::Whitespace) == TokenSequence{0, 1, 0});
    CHECK(tokenize("  a\t\nb  ", v, Scheme::Whitespace) == TokenSequence{0, 1});
    // U+3000 ideographic space and U+00A0 no-break space count as whitespace
    CHECK(tokenize("a　b a", v, Scheme::Whitespace) == TokenSequence{0, 1, 0});
    CHECK(kind_of([&] { tokenize("a c", v, Scheme::Whitespace); }) == ErrorKind::UnknownToken);

    Vocabulary with_unk({"a", "<unk>"}, std::nullopt, 1);
    CHECK(tokenize("a zz a", with_unk, Scheme::Whitespace) == TokenSequence{0, 1, 0});
}

TEST_CASE("empty input yields no tokens under every scheme") {
    Vocabulary v({"a", "b"});
    CHECK(tokenize("", v, Scheme::Whitespace).empty());
    CHECK(tokenize("", Vocabulary::bytes(), Scheme::Byte).empty());
    CHECK(tokenize("", v, Scheme::ExternalMap).empty());
}

TEST_CASE("byte scheme") {
    CHECK(tokenize("ab", Vocabulary::bytes(), Scheme::Byte) == TokenSequence{97, 98});
    CHECK(tokenize("\xff", Vocabulary::bytes(), Scheme::Byte) == TokenSequence{255});
    CHECK(kind_of([] { tokenize("ab", Vocabulary({"a"}), Scheme::Byte); }) == ErrorKind::VocabMismatch);
    auto vb = Vocabulary::bytes(true);
    CHECK(vb.size() == 257);
    CHECK(vb.bos_id() == TokenId{256});
}

TEST_CASE("external map takes the longest piece") {
    Vocabulary v({"a", "ab", "abc", "c", " "});
    CHECK(tokenize("abcab c", v, Scheme::ExternalMap) == TokenSequence{2, 1, 4, 3});
    CHECK(detokenize({2, 1, 4, 3}, v, Scheme::ExternalMap) == "abcab c");
    CHECK(kind_of([&] { tokenize("abx", v, Scheme::ExternalMap); }) == ErrorKind::UnknownToken);
}

TEST_CASE("lowercase transform") {
    auto r = lowercase_transform("AbC");
    CHECK(r.lowered == "abc");
    CHECK(r.changed);
    r = lowercase_transform("abc");
    CHECK(r.lowered == "abc");
    CHECK_FALSE(r.changed);
    r = lowercase_transform("专利文本");
    CHECK(r.lowered == "专利文本");
    CHECK_FALSE(r.changed);
    r = lowercase_transform("ÄÖÜ Σ");
    CHECK(r.lowered == "äöü σ");
    CHECK(r.changed);
}

TEST_CASE("round trip: byte scheme on arbitrary bytes") {
    std::mt19937_64 rng(7);
    auto vb = Vocabulary::bytes();
    for (int t = 0; t < 200; ++t) {
        std::string s(rng() % 64, '\0');
        for (auto& c : s) c = static_cast<char>(rng() & 0xff);
        CHECK(detokenize(tokenize(s, vb, Scheme::Byte), vb, Scheme::Byte) == s);
    }
}

TEST_CASE("round trip: whitespace scheme on single-space texts") {
    std::mt19937_64 rng(11);
    Vocabulary v({"alpha", "beta", "gamma", "δέλτα", "x"});
    for (int t = 0; t < 200; ++t) {
        std::string s;
        const auto n = 1 + rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            if (i) s += ' ';
            s += v.surface(static_cast<TokenId>(rng() % v.size()));
        }
        const auto ids = tokenize(s, v, Scheme::Whitespace);
        CHECK(ids.size() == n);
        CHECK(detokenize(ids, v, Scheme::Whitespace) == s);
        CHECK(tokenize(s, v, Scheme::Whitespace) == ids);
    }
}

TEST_CASE("vocabulary file round trip and validation") {
    const auto path = std::filesystem::temp_directory_path() / "pdd_test_vocab.txt";
    Vocabulary v({"a", "b", "<s>", "<unk>"}, 2, 3);
    v.save(path);
    CHECK(Vocabulary::load(path) == v);
    std::filesystem::remove(path);

    CHECK(kind_of([] { Vocabulary({"a", "a"}); }) == ErrorKind::SchemaError);
    CHECK(kind_of([] { Vocabulary::load("/nonexistent/pdd/vocab.txt"); }) == ErrorKind::Io);
    CHECK(parse_scheme("external-map") == Scheme::ExternalMap);
    CHECK(to_string(Scheme::Byte) == "byte");
}
