#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pdd/ngram_lm.hpp"

namespace pdd {

// Seeded generator of English-looking documents: a Zipf-weighted lexicon
// with sparse preferred-successor structure, capitalized sentence starts and
// "." sentence ends. Sampling is done by hand on top of mt19937_64 so output
// depends only on the seed.
class SyntheticCorpus {
public:
    struct Params {
        std::size_t lexicon_size = 1500;
        std::size_t successors_per_word = 6;
        double successor_bias = 0.6;  // chance the next word is a preferred successor
        double zipf_exponent = 1.05;
        std::size_t min_words = 40;
        std::size_t max_words = 80;
        std::size_t min_sentence = 6;
        std::size_t max_sentence = 14;
    };

    explicit SyntheticCorpus(std::uint64_t seed);
    SyntheticCorpus(std::uint64_t seed, Params params);

    const std::vector<std::string>& lexicon() const noexcept { return lexicon_; }

    std::string document();
    std::vector<Document> documents(std::size_t count, const std::string& id_prefix);

private:
    double uniform();
    std::size_t below(std::size_t n);
    std::size_t zipf_word();

    Params params_;
    std::mt19937_64 rng_;
    std::vector<std::string> lexicon_;
    std::vector<double> cdf_;
    std::vector<std::vector<std::size_t>> successors_;
};

}  // namespace pdd
