#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdd/ngram_lm.hpp"
#include "pdd/tokenizer.hpp"

namespace pdd {

// One scored position of a text. Position 0 is the prepended BOS token and
// never appears.
struct TokenEvent {
    std::uint32_t position = 0;
    TokenId token_id = 0;
    double prob = 0.0;
    double logprob = 0.0;
    std::optional<DistStats> dist;

    static TokenEvent from_logprob(std::uint32_t position, TokenId id, double logprob,
                                   std::optional<DistStats> dist = std::nullopt);

    friend bool operator==(const TokenEvent&, const TokenEvent&) = default;
};

struct LogprobRecord {
    std::string doc_id;
    std::vector<TokenEvent> events;
    std::uint32_t vocab_size = 0;
    std::string provider;

    std::size_t size() const noexcept { return events.size(); }
    bool has_dist_stats() const noexcept;

    friend bool operator==(const LogprobRecord&, const LogprobRecord&) = default;
};

// Shared validator for every backend: consecutive 1-based positions, ids
// below vocab_size, prob in (0, 1] with logprob = ln(prob), sigma >= 0.
// Throws SchemaError (InconsistentVocabSize for out-of-range ids).
void validate(const LogprobRecord& record);

nlohmann::json to_json(const LogprobRecord& record);
LogprobRecord record_from_json(const nlohmann::json& j);

// JSONL dump reader. Records come back in file order; every record must
// declare the same vocab_size as the first.
class DumpReader {
public:
    explicit DumpReader(const std::filesystem::path& path);

    std::optional<LogprobRecord> next();
    std::size_t line() const noexcept { return line_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t line_ = 0;
    std::optional<std::uint32_t> vocab_size_;
};

std::vector<LogprobRecord> read_dump(const std::filesystem::path& path);
void write_dump(const std::filesystem::path& path, std::span<const LogprobRecord> records);

// OpenAI-compatible completions endpoint queried with echo + logprobs.
struct ApiConfig {
    std::string endpoint;                   // scheme://host[:port]
    std::string path = "/v1/completions";
    std::string model;
    std::string api_key_env = "PDD_API_KEY";
    std::string bos_text = "<|endoftext|>";
    std::uint32_t vocab_size = 0;
    unsigned max_retries = 4;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{8000};
    std::chrono::seconds timeout{60};
    unsigned concurrency = 4;
    // Maps returned token strings to ids when the server does not answer in
    // "token_id:<n>" form.
    std::optional<Vocabulary> vocab;
};

struct FetchStats {
    std::atomic<std::uint64_t> requests{0};
    std::atomic<std::uint64_t> retries{0};
};

ApiConfig api_config_from_json(const nlohmann::json& j);

// Request body for one text; exposed for golden tests.
nlohmann::json api_request_body(std::string_view text, const ApiConfig& cfg);

// Parses a completions response for a prompt of bos_text + text.
LogprobRecord parse_api_response(const nlohmann::json& response, std::string doc_id,
                                 std::string_view text, const ApiConfig& cfg);

LogprobRecord fetch_api(std::string doc_id, std::string_view text, const ApiConfig& cfg,
                        FetchStats* stats = nullptr);

// Fetches all documents with at most cfg.concurrency requests in flight.
// Results are in input order; a failed document rethrows its error on
// access through `errors`.
struct BatchResult {
    std::vector<std::optional<LogprobRecord>> records;
    std::vector<std::exception_ptr> errors;
};
BatchResult fetch_api_batch(std::span<const Document> docs, const ApiConfig& cfg,
                            FetchStats* stats = nullptr);

// Exact oracle probabilities with full-vocabulary statistics per event.
LogprobRecord fetch_oracle(std::string doc_id, std::string_view text, const NGramModel& oracle,
                           Scheme scheme);
LogprobRecord fetch_oracle(std::string doc_id, std::span<const TokenId> ids, const NGramModel& oracle);

}  // namespace pdd
