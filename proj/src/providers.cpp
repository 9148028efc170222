#include "pdd/providers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "pdd/error.hpp"

namespace pdd {

TokenEvent TokenEvent::from_logprob(std::uint32_t position, TokenId id, double logprob,
                                    std::optional<DistStats> dist) {
    return {position, id, std::exp(logprob), logprob, dist};
}

bool LogprobRecord::has_dist_stats() const noexcept {
    return std::all_of(events.begin(), events.end(), [](const TokenEvent& e) { return e.dist.has_value(); });
}

void validate(const LogprobRecord& record) {
    if (record.vocab_size == 0) throw Error(ErrorKind::SchemaError, record.doc_id + ": vocab_size must be positive");
    for (std::size_t k = 0; k < record.events.size(); ++k) {
        const auto& e = record.events[k];
        const auto where = record.doc_id + " event " + std::to_string(k) + ": ";
        if (e.position != k + 1)
            throw Error(ErrorKind::SchemaError, where + "position " + std::to_string(e.position) + ", expected " +
                                                    std::to_string(k + 1));
        if (e.token_id >= record.vocab_size)
            throw Error(ErrorKind::InconsistentVocabSize, where + "token id " + std::to_string(e.token_id) +
                                                              " >= vocab_size " + std::to_string(record.vocab_size));
        if (!std::isfinite(e.logprob) || e.logprob > 0.0)
            throw Error(ErrorKind::SchemaError, where + "logprob must be finite and <= 0");
        if (!(e.prob > 0.0 && e.prob <= 1.0) || std::abs(std::log(e.prob) - e.logprob) > 1e-12)
            throw Error(ErrorKind::SchemaError, where + "prob disagrees with logprob");
        if (e.dist && (!std::isfinite(e.dist->mu) || !std::isfinite(e.dist->sigma) || e.dist->sigma < 0.0))
            throw Error(ErrorKind::SchemaError, where + "dist stats must be finite with sigma >= 0");
    }
}

nlohmann::json to_json(const LogprobRecord& record) {
    auto events = nlohmann::json::array();
    for (const auto& e : record.events) {
        nlohmann::json ev = {{"i", e.position}, {"id", e.token_id}, {"logprob", e.logprob}};
        ev["mu"] = e.dist ? nlohmann::json(e.dist->mu) : nlohmann::json(nullptr);
        ev["sigma"] = e.dist ? nlohmann::json(e.dist->sigma) : nlohmann::json(nullptr);
        events.push_back(std::move(ev));
    }
    return {{"doc_id", record.doc_id},
            {"vocab_size", record.vocab_size},
            {"provider", record.provider},
            {"events", std::move(events)}};
}

LogprobRecord record_from_json(const nlohmann::json& j) {
    try {
        LogprobRecord r;
        r.doc_id = j.at("doc_id").get<std::string>();
        r.vocab_size = j.at("vocab_size").get<std::uint32_t>();
        r.provider = j.at("provider").get<std::string>();
        for (const auto& ev : j.at("events")) {
            std::optional<DistStats> dist;
            const bool has_mu = ev.contains("mu") && !ev["mu"].is_null();
            const bool has_sigma = ev.contains("sigma") && !ev["sigma"].is_null();
            if (has_mu != has_sigma) throw Error(ErrorKind::SchemaError, "mu and sigma must be given together");
            if (has_mu) dist = DistStats{ev["mu"].get<double>(), ev["sigma"].get<double>()};
            r.events.push_back(TokenEvent::from_logprob(ev.at("i").get<std::uint32_t>(),
                                                        ev.at("id").get<TokenId>(),
                                                        ev.at("logprob").get<double>(), dist));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaError, e.what());
    }
}

DumpReader::DumpReader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path.string()) {
    if (!in_) throw Error(ErrorKind::Io, "cannot open dump " + path_);
}

std::optional<LogprobRecord> DumpReader::next() {
    std::string text;
    while (std::getline(in_, text)) {
        ++line_;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = path_ + ":" + std::to_string(line_) + ": ";
        LogprobRecord record;
        try {
            record = record_from_json(nlohmann::json::parse(text));
            validate(record);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError, where + e.what());
        } catch (const Error& e) {
            throw Error(e.kind(), where + e.what());
        }
        if (vocab_size_ && *vocab_size_ != record.vocab_size)
            throw Error(ErrorKind::InconsistentVocabSize, where + "vocab_size " + std::to_string(record.vocab_size) +
                                                              " differs from earlier " + std::to_string(*vocab_size_));
        vocab_size_ = record.vocab_size;
        return record;
    }
    return std::nullopt;
}

std::vector<LogprobRecord> read_dump(const std::filesystem::path& path) {
    DumpReader reader(path);
    std::vector<LogprobRecord> out;
    while (auto r = reader.next()) out.push_back(std::move(*r));
    return out;
}

void write_dump(const std::filesystem::path& path, std::span<const LogprobRecord> records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write dump " + path.string());
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

LogprobRecord fetch_oracle(std::string doc_id, std::string_view text, const NGramModel& oracle, Scheme scheme) {
    const auto ids = tokenize(text, oracle.vocab(), scheme);
    return fetch_oracle(std::move(doc_id), ids, oracle);
}

LogprobRecord fetch_oracle(std::string doc_id, std::span<const TokenId> ids, const NGramModel& oracle) {
    LogprobRecord record;
    record.doc_id = std::move(doc_id);
    record.vocab_size = oracle.vocab_size();
    record.provider = "ngram-oracle/order-" + std::to_string(oracle.order());
    record.events.reserve(ids.size());
    std::map<NGramModel::Context, DistStats> stats_cache;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto ctx = oracle.context_at(ids, i);
        auto cached = stats_cache.find(ctx);
        if (cached == stats_cache.end()) cached = stats_cache.emplace(ctx, oracle.dist_stats(ctx)).first;
        // prob is always rederived from logprob so records survive a dump
        // round trip bit for bit.
        const double lp = std::log(oracle.next_token_prob(ctx, ids[i]));
        record.events.push_back(
            TokenEvent::from_logprob(static_cast<std::uint32_t>(i + 1), ids[i], lp, cached->second));
    }
    validate(record);
    return record;
}

}  // namespace pdd
