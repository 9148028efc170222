#include "pdd/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pdd/binio.hpp"
#include "pdd/error.hpp"

namespace pdd {

NGramModel::NGramModel(unsigned order, Vocabulary vocab) : order_(order), vocab_(std::move(vocab)) {
    if (order_ < 1) throw Error(ErrorKind::Config, "n-gram order must be >= 1");
    if (vocab_.empty()) throw Error(ErrorKind::EmptyVocabulary, "n-gram model needs a vocabulary");
}

NGramModel NGramModel::train(std::span<const Document> corpus, unsigned order, Vocabulary vocab,
                             Scheme scheme) {
    if (corpus.empty()) throw Error(ErrorKind::EmptyText, "cannot train on an empty corpus");
    NGramModel model(order, std::move(vocab));
    TokenSequence ids;
    for (const auto& doc : corpus) {
        ids.clear();
        tokenize_append(doc.text, model.vocab_, scheme, ids);
        model.observe(doc.doc_id, ids);
    }
    return model;
}

void NGramModel::observe(const std::string& doc_id, std::span<const TokenId> ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] >= vocab_.size())
            throw Error(ErrorKind::TokenOutOfRange, std::to_string(ids[i]) + " >= |V| " + std::to_string(vocab_.size()));
        auto& stats = contexts_[context_at(ids, i)];
        ++stats.successors[ids[i]];
        ++stats.total;
    }
    manifest_.insert(doc_id);
}

NGramModel::Context NGramModel::context_at(std::span<const TokenId> ids, std::size_t i) const {
    const std::size_t width = order_ - 1;
    const std::size_t have = std::min(width, i);
    Context ctx;
    ctx.reserve(width);
    if (have < width && vocab_.bos_id()) ctx.assign(width - have, *vocab_.bos_id());
    ctx.insert(ctx.end(), ids.begin() + static_cast<std::ptrdiff_t>(i - have),
               ids.begin() + static_cast<std::ptrdiff_t>(i));
    return ctx;
}

const NGramModel::ContextStats* NGramModel::find(std::span<const TokenId> context) const {
    if (context.size() > order_ - 1) context = context.subspan(context.size() - (order_ - 1));
    auto it = contexts_.find(Context(context.begin(), context.end()));
    return it == contexts_.end() ? nullptr : &it->second;
}

double NGramModel::next_token_prob(std::span<const TokenId> context, TokenId token) const {
    if (token >= vocab_.size())
        throw Error(ErrorKind::TokenOutOfRange, std::to_string(token) + " >= |V| " + std::to_string(vocab_.size()));
    const double V = static_cast<double>(vocab_.size());
    const auto* stats = find(context);
    if (!stats) return 1.0 / V;
    const auto it = stats->successors.find(token);
    const double c = it == stats->successors.end() ? 0.0 : static_cast<double>(it->second);
    return (c + 1.0) / (static_cast<double>(stats->total) + V);
}

DistStats NGramModel::dist_stats(std::span<const TokenId> context) const {
    const double V = static_cast<double>(vocab_.size());
    const auto* stats = find(context);
    if (!stats) return {std::log(1.0 / V), 0.0};

    // Unseen successors all share one probability, so both moments reduce to
    // a pass over the seen successors plus one lumped term.
    const double denom = static_cast<double>(stats->total) + V;
    const double unseen = V - static_cast<double>(stats->successors.size());
    const double p0 = 1.0 / denom;
    const double lp0 = std::log(p0);

    double mu = unseen * p0 * lp0;
    for (const auto& [id, c] : stats->successors) {
        const double p = (static_cast<double>(c) + 1.0) / denom;
        mu += p * std::log(p);
    }
    double var = unseen * p0 * (lp0 - mu) * (lp0 - mu);
    for (const auto& [id, c] : stats->successors) {
        const double p = (static_cast<double>(c) + 1.0) / denom;
        const double d = std::log(p) - mu;
        var += p * d * d;
    }
    return {mu, std::sqrt(std::max(0.0, var))};
}

Vocabulary default_vocabulary(std::span<const Document> corpus) {
    std::set<std::string, std::less<>> words;
    for (const auto& doc : corpus)
        for (auto w : split_whitespace(doc.text)) words.emplace(w);
    words.erase("<s>");
    words.erase("<unk>");
    std::vector<std::string> entries(words.begin(), words.end());
    const auto bos = static_cast<TokenId>(entries.size());
    entries.emplace_back("<s>");
    entries.emplace_back("<unk>");
    return Vocabulary(std::move(entries), bos, bos + 1);
}

namespace {

constexpr std::string_view kMagic = "NGM1";

void write_vocab(binio::Writer& w, const Vocabulary& vocab) {
    w.le(static_cast<std::uint32_t>(vocab.size()));
    const std::uint8_t flags = (vocab.bos_id() ? 1 : 0) | (vocab.unk_id() ? 2 : 0);
    w.le(flags);
    w.le(vocab.bos_id().value_or(0));
    w.le(vocab.unk_id().value_or(0));
    for (const auto& e : vocab.entries()) w.str(e);
}

Vocabulary read_vocab(binio::Reader& r) {
    const auto size = r.le<std::uint32_t>();
    const auto flags = r.le<std::uint8_t>();
    const auto bos = r.le<std::uint32_t>();
    const auto unk = r.le<std::uint32_t>();
    if (size == 0) r.fail("empty vocabulary block");
    std::vector<std::string> entries;
    entries.reserve(size);
    for (std::uint32_t i = 0; i < size; ++i) entries.push_back(r.str());
    std::optional<TokenId> bos_id, unk_id;
    if (flags & 1) bos_id = bos;
    if (flags & 2) unk_id = unk;
    try {
        return Vocabulary(std::move(entries), bos_id, unk_id);
    } catch (const Error& e) {
        r.fail(e.what());
    }
}

}  // namespace

std::string serialize(const NGramModel& model) {
    binio::Writer w;
    w.bytes(kMagic);
    w.le(static_cast<std::uint32_t>(model.order()));
    write_vocab(w, model.vocab());
    w.le(static_cast<std::uint64_t>(model.contexts().size()));
    for (const auto& [ctx, stats] : model.contexts()) {
        w.le(static_cast<std::uint32_t>(ctx.size()));
        for (auto id : ctx) w.le(id);
        w.le(stats.total);
        w.le(static_cast<std::uint32_t>(stats.successors.size()));
        for (const auto& [id, c] : stats.successors) {
            w.le(id);
            w.le(c);
        }
    }
    w.seal();
    return w.take();
}

NGramModel deserialize_model(std::string_view bytes) {
    binio::Reader r(bytes, kMagic, ErrorKind::CorruptTable);
    const auto order = r.le<std::uint32_t>();
    if (order < 1) r.fail("order must be >= 1");
    NGramModel model(order, read_vocab(r));
    const auto n_contexts = r.le<std::uint64_t>();
    const auto V = model.vocab_size();
    for (std::uint64_t k = 0; k < n_contexts; ++k) {
        const auto len = r.le<std::uint32_t>();
        if (len > order - 1) r.fail("context longer than order - 1");
        NGramModel::Context ctx(len);
        for (auto& id : ctx) {
            id = r.le<std::uint32_t>();
            if (id >= V) r.fail("context id out of range");
        }
        NGramModel::ContextStats stats;
        stats.total = r.le<std::uint64_t>();
        const auto n_succ = r.le<std::uint32_t>();
        std::uint64_t sum = 0;
        for (std::uint32_t s = 0; s < n_succ; ++s) {
            const auto id = r.le<std::uint32_t>();
            const auto c = r.le<std::uint64_t>();
            if (id >= V) r.fail("successor id out of range");
            stats.successors[id] = c;
            sum += c;
        }
        if (sum != stats.total) r.fail("context total disagrees with successor counts");
        model.contexts_.emplace(std::move(ctx), std::move(stats));
    }
    if (!r.done()) r.fail("trailing bytes after context blocks");
    return model;
}

void save(const NGramModel& model, const std::filesystem::path& path) {
    binio::write_file(path.string(), serialize(model));
    std::ofstream manifest(path.string() + ".manifest.jsonl", std::ios::binary | std::ios::trunc);
    if (!manifest) throw Error(ErrorKind::Io, "cannot write manifest for " + path.string());
    for (const auto& id : model.manifest()) manifest << nlohmann::json{{"doc_id", id}}.dump() << '\n';
}

NGramModel load_model(const std::filesystem::path& path) {
    auto model = deserialize_model(binio::read_file(path.string()));
    std::ifstream manifest(path.string() + ".manifest.jsonl", std::ios::binary);
    std::string line;
    while (manifest && std::getline(manifest, line)) {
        if (line.empty()) continue;
        try {
            model.observe(nlohmann::json::parse(line).at("doc_id").get<std::string>(), {});
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError, "manifest for " + path.string() + ": " + e.what());
        }
    }
    return model;
}

}  // namespace pdd
