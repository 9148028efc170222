#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pdd/tokenizer.hpp"

namespace pdd {

struct Document {
    std::string doc_id;
    std::string text;
};

// Mean and standard deviation of ln p(z | context) under p(z | context),
// taken over the whole vocabulary.
struct DistStats {
    double mu = 0.0;
    double sigma = 0.0;

    friend bool operator==(const DistStats&, const DistStats&) = default;
};

// Add-one smoothed n-gram model with a known training manifest. Histories
// shorter than order-1 are left-padded with the vocabulary's BOS id; without
// a BOS id the shorter history is its own context.
class NGramModel {
public:
    using Context = std::vector<TokenId>;

    struct ContextStats {
        std::map<TokenId, std::uint64_t> successors;
        std::uint64_t total = 0;

        friend bool operator==(const ContextStats&, const ContextStats&) = default;
    };

    NGramModel(unsigned order, Vocabulary vocab);

    static NGramModel train(std::span<const Document> corpus, unsigned order, Vocabulary vocab,
                            Scheme scheme);

    // Counts one already tokenized document.
    void observe(const std::string& doc_id, std::span<const TokenId> ids);

    unsigned order() const noexcept { return order_; }
    const Vocabulary& vocab() const noexcept { return vocab_; }
    std::uint32_t vocab_size() const noexcept { return static_cast<std::uint32_t>(vocab_.size()); }
    const std::map<Context, ContextStats>& contexts() const noexcept { return contexts_; }
    const std::set<std::string>& manifest() const noexcept { return manifest_; }

    // Context used to predict ids[i] (0-based) given the preceding tokens.
    Context context_at(std::span<const TokenId> ids, std::size_t i) const;

    // (count(ctx, token) + 1) / (total(ctx) + |V|); 1/|V| for unseen contexts.
    double next_token_prob(std::span<const TokenId> context, TokenId token) const;
    DistStats dist_stats(std::span<const TokenId> context) const;

    friend bool operator==(const NGramModel&, const NGramModel&) = default;

private:
    friend NGramModel deserialize_model(std::string_view bytes);

    const ContextStats* find(std::span<const TokenId> context) const;

    unsigned order_;
    Vocabulary vocab_;
    std::map<Context, ContextStats> contexts_;
    std::set<std::string> manifest_;
};

// Sorted distinct whitespace words of the corpus, then "<s>" (BOS) and
// "<unk>".
Vocabulary default_vocabulary(std::span<const Document> corpus);

std::string serialize(const NGramModel& model);
NGramModel deserialize_model(std::string_view bytes);

// Writes the model to `path` and its manifest to `path` + ".manifest.jsonl".
void save(const NGramModel& model, const std::filesystem::path& path);
NGramModel load_model(const std::filesystem::path& path);

}  // namespace pdd
