#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdd/tokenizer.hpp"

namespace pdd {

// Raw token counts of a reference corpus. Counts are kept dense over the
// vocabulary id space; smoothing happens at query time so the same table can
// serve target models with a larger |V|.
class FrequencyTable {
public:
    FrequencyTable() = default;
    explicit FrequencyTable(std::uint32_t vocab_size, std::string corpus_tag = {});

    // Throws CountOverflow if the counts do not sum within 64 bits.
    static FrequencyTable from_counts(std::vector<std::uint64_t> counts, std::string corpus_tag = {});

    std::uint32_t vocab_size() const noexcept { return static_cast<std::uint32_t>(counts_.size()); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t count(TokenId id) const;
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    // Number of ids with a nonzero count.
    std::uint64_t distinct() const noexcept;

    const std::string& corpus_tag() const noexcept { return corpus_tag_; }
    void set_corpus_tag(std::string tag) { corpus_tag_ = std::move(tag); }

    void add(TokenId id, std::uint64_t n = 1);
    void add(std::span<const TokenId> ids);

    // The corpus tag is metadata outside the persisted format and is not
    // compared.
    friend bool operator==(const FrequencyTable& a, const FrequencyTable& b) {
        return a.total_ == b.total_ && a.counts_ == b.counts_;
    }

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
    std::string corpus_tag_;
};

FrequencyTable merge(const FrequencyTable& a, const FrequencyTable& b);

// Laplace-smoothed (count + 1) / (N' + |V|) with |V| = table.vocab_size().
double smoothed_prob(const FrequencyTable& table, TokenId id);

// Same, but with the target model's |V|, which may exceed the table's id
// space (ids past the table count as unseen).
double smoothed_prob(const FrequencyTable& table, TokenId id, std::uint32_t model_vocab_size);

FrequencyTable build(std::span<const std::string> documents, const Vocabulary& vocab, Scheme scheme,
                     unsigned jobs = 1);

// Newline-delimited UTF-8, one document per line. The file is split into
// `jobs` byte ranges aligned to line starts, counted independently and
// merged in range order.
FrequencyTable build_from_file(const std::filesystem::path& corpus, const Vocabulary& vocab,
                               Scheme scheme, unsigned jobs = 1);

std::string serialize(const FrequencyTable& table);
FrequencyTable deserialize_table(std::string_view bytes);

void save(const FrequencyTable& table, const std::filesystem::path& path);
FrequencyTable load_table(const std::filesystem::path& path);

}  // namespace pdd
