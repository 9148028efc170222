#include "pdd/scoring.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdd/error.hpp"

namespace pdd {

Method parse_method(std::string_view name) {
    if (name == "dcpdd") return Method::DcPdd;
    if (name == "ppl") return Method::Ppl;
    if (name == "lowercase") return Method::Lowercase;
    if (name == "compression" || name == "zlib") return Method::Compression;
    if (name == "small_ref") return Method::SmallRef;
    if (name == "mink") return Method::MinK;
    if (name == "minkpp") return Method::MinKpp;
    throw Error(ErrorKind::Config, "unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::DcPdd: return "dcpdd";
        case Method::Ppl: return "ppl";
        case Method::Lowercase: return "lowercase";
        case Method::Compression: return "compression";
        case Method::SmallRef: return "small_ref";
        case Method::MinK: return "mink";
        case Method::MinKpp: return "minkpp";
    }
    return "?";
}

namespace {

void require_events(const LogprobRecord& record) {
    if (record.events.empty()) throw Error(ErrorKind::EmptyRecord, record.doc_id + " has no scored tokens");
}

DetectionScore make_score(const LogprobRecord& record, Method method, double value) {
    if (!std::isfinite(value))
        throw Error(ErrorKind::SchemaError, record.doc_id + ": non-finite " + std::string(to_string(method)) + " score");
    return {record.doc_id, method, value, {}};
}

double mean_of_smallest(std::vector<double> values, std::size_t m) {
    std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m), values.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += values[i];
    return sum / static_cast<double>(m);
}

}  // namespace

DetectionScore dcpdd_score(const LogprobRecord& record, const DcPddConfig& cfg) {
    if (!cfg.table) throw Error(ErrorKind::Config, "DC-PDD needs a frequency table");
    if (!(cfg.clip_bound > 0.0)) throw Error(ErrorKind::Config, "clip bound a must be positive");
    const auto& table = *cfg.table;
    if (record.vocab_size != table.vocab_size())
        throw Error(ErrorKind::VocabMismatch, record.doc_id + ": record |V| " + std::to_string(record.vocab_size) +
                                                  " vs frequency table |V| " + std::to_string(table.vocab_size()));
    require_events(record);

    std::vector<bool> seen(table.vocab_size(), false);
    double sum = 0.0;
    std::size_t first_occurrences = 0;
    std::size_t clipped = 0;
    for (const auto& e : record.events) {
        if (seen[e.token_id]) continue;
        seen[e.token_id] = true;
        double alpha = -e.prob * std::log(smoothed_prob(table, e.token_id));
        if (alpha >= cfg.clip_bound) {
            alpha = cfg.clip_bound;
            ++clipped;
        }
        sum += alpha;
        ++first_occurrences;
    }
    auto score = make_score(record, Method::DcPdd, sum / static_cast<double>(first_occurrences));
    score.extras = {{"fos_size", static_cast<double>(first_occurrences)},
                    {"clipped", static_cast<double>(clipped)},
                    {"n", static_cast<double>(record.size())},
                    {"a", cfg.clip_bound}};
    return score;
}

double perplexity(const LogprobRecord& record) {
    require_events(record);
    double sum = 0.0;
    for (const auto& e : record.events) sum += e.logprob;
    return std::exp(-sum / static_cast<double>(record.size()));
}

DetectionScore ppl_score(const LogprobRecord& record) {
    const double ppl = perplexity(record);
    auto score = make_score(record, Method::Ppl, -ppl);
    score.extras = {{"ppl", ppl}, {"n", static_cast<double>(record.size())}};
    return score;
}

DetectionScore lowercase_score(const LogprobRecord& record, const LogprobRecord& lowered, bool changed) {
    if (!changed)
        throw Error(ErrorKind::NotApplicable, record.doc_id + ": lowercasing leaves the text unchanged");
    const double ppl = perplexity(record);
    const double ppl_lower = perplexity(lowered);
    auto score = make_score(record, Method::Lowercase, -(ppl / ppl_lower));
    score.extras = {{"ppl", ppl}, {"ppl_lower", ppl_lower}};
    return score;
}

std::uint64_t zlib_entropy_bits(std::string_view raw_text) {
    if (raw_text.empty()) throw Error(ErrorKind::EmptyText, "compression score needs non-empty text");
    uLongf size = compressBound(static_cast<uLong>(raw_text.size()));
    std::vector<Bytef> buf(size);
    const int rc = compress2(buf.data(), &size, reinterpret_cast<const Bytef*>(raw_text.data()),
                             static_cast<uLong>(raw_text.size()), kCompressionLevel);
    if (rc != Z_OK) throw Error(ErrorKind::Io, "zlib compress2 failed with code " + std::to_string(rc));
    return 8ULL * size;
}

DetectionScore compression_score(const LogprobRecord& record, std::string_view raw_text) {
    if (raw_text.empty()) throw Error(ErrorKind::EmptyText, record.doc_id + ": compression score needs non-empty text");
    const double ppl = perplexity(record);
    const auto bits = zlib_entropy_bits(raw_text);
    auto score = make_score(record, Method::Compression, -(ppl / static_cast<double>(bits)));
    score.extras = {{"ppl", ppl}, {"entropy_bits", static_cast<double>(bits)}};
    return score;
}

DetectionScore small_ref_score(const LogprobRecord& record, const LogprobRecord& reference) {
    if (record.size() != reference.size())
        throw Error(ErrorKind::LengthMismatch, record.doc_id + ": target has " + std::to_string(record.size()) +
                                                   " tokens, reference has " + std::to_string(reference.size()));
    const double ppl = perplexity(record);
    const double ppl_ref = perplexity(reference);
    auto score = make_score(record, Method::SmallRef, -(ppl / ppl_ref));
    score.extras = {{"ppl", ppl}, {"ppl_ref", ppl_ref}};
    return score;
}

std::size_t min_k_count(std::size_t n, double k_percent) {
    if (!(k_percent > 0.0 && k_percent <= 100.0)) throw Error(ErrorKind::Config, "k must lie in (0, 100]");
    const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * k_percent / 100.0));
    return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(1, n));
}

DetectionScore mink_score(const LogprobRecord& record, double k_percent) {
    require_events(record);
    const auto m = min_k_count(record.size(), k_percent);
    std::vector<double> logprobs;
    logprobs.reserve(record.size());
    for (const auto& e : record.events) logprobs.push_back(e.logprob);
    auto score = make_score(record, Method::MinK, mean_of_smallest(std::move(logprobs), m));
    score.extras = {{"k", k_percent}, {"m", static_cast<double>(m)}};
    return score;
}

DetectionScore minkpp_score(const LogprobRecord& record, double k_percent, double sigma_floor) {
    if (!record.has_dist_stats())
        throw Error(ErrorKind::NotApplicable,
                    record.doc_id + ": provider " + record.provider + " exposes no full-vocabulary statistics");
    require_events(record);
    const auto m = min_k_count(record.size(), k_percent);
    std::vector<double> normalized;
    normalized.reserve(record.size());
    for (const auto& e : record.events)
        normalized.push_back((e.logprob - e.dist->mu) / std::max(e.dist->sigma, sigma_floor));
    auto score = make_score(record, Method::MinKpp, mean_of_smallest(std::move(normalized), m));
    score.extras = {{"k", k_percent}, {"m", static_cast<double>(m)}};
    return score;
}

Decision decide(const DetectionScore& score, double threshold) {
    return {score.doc_id, threshold, score.value >= threshold};
}

}  // namespace pdd
