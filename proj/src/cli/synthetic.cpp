#include "pdd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdd {

namespace {

constexpr const char* kOnsets[] = {"b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p",
                                   "r", "s", "t", "v", "w", "z", "br", "ch", "st", "tr", "sh", "pl"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou"};
constexpr const char* kCodas[] = {"", "", "n", "r", "s", "t", "l", "m", "nd", "st"};

}  // namespace

SyntheticCorpus::SyntheticCorpus(std::uint64_t seed) : SyntheticCorpus(seed, Params{}) {}

SyntheticCorpus::SyntheticCorpus(std::uint64_t seed, Params params) : params_(params), rng_(seed) {
    std::set<std::string> used;
    while (lexicon_.size() < params_.lexicon_size) {
        std::string word;
        const auto syllables = 1 + below(3);
        for (std::size_t s = 0; s < syllables; ++s) {
            word += kOnsets[below(std::size(kOnsets))];
            word += kVowels[below(std::size(kVowels))];
        }
        word += kCodas[below(std::size(kCodas))];
        if (used.insert(word).second) lexicon_.push_back(std::move(word));
    }

    cdf_.resize(lexicon_.size());
    double acc = 0.0;
    for (std::size_t r = 0; r < lexicon_.size(); ++r) {
        acc += 1.0 / std::pow(static_cast<double>(r + 1), params_.zipf_exponent);
        cdf_[r] = acc;
    }
    for (auto& c : cdf_) c /= acc;

    successors_.resize(lexicon_.size());
    for (auto& succ : successors_)
        for (std::size_t k = 0; k < params_.successors_per_word; ++k) succ.push_back(zipf_word());
}

double SyntheticCorpus::uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::size_t SyntheticCorpus::below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

std::size_t SyntheticCorpus::zipf_word() {
    const double u = uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

std::string SyntheticCorpus::document() {
    const auto span_words = params_.max_words - params_.min_words + 1;
    const auto length = params_.min_words + below(span_words);
    std::string text;
    std::size_t sentence_left = 0;
    std::size_t prev = zipf_word();
    for (std::size_t w = 0; w < length; ++w) {
        const bool starts_sentence = sentence_left == 0;
        if (starts_sentence)
            sentence_left = params_.min_sentence + below(params_.max_sentence - params_.min_sentence + 1);
        const std::size_t word = uniform() < params_.successor_bias
                                     ? successors_[prev][below(successors_[prev].size())]
                                     : zipf_word();
        if (!text.empty()) text.push_back(' ');
        std::string surface = lexicon_[word];
        if (starts_sentence) surface[0] = static_cast<char>(surface[0] - 'a' + 'A');
        text += surface;
        prev = word;
        if (--sentence_left == 0 || w + 1 == length) text += " .";
    }
    return text;
}

std::vector<Document> SyntheticCorpus::documents(std::size_t count, const std::string& id_prefix) {
    std::vector<Document> docs;
    docs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) docs.push_back({id_prefix + std::to_string(k), document()});
    return docs;
}

}  // namespace pdd
