#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pdd/error.hpp"
#include "pdd/providers.hpp"

namespace pdd {

ApiConfig api_config_from_json(const nlohmann::json& j) {
    ApiConfig cfg;
    try {
        cfg.endpoint = j.at("endpoint").get<std::string>();
        cfg.model = j.value("model", cfg.model);
        cfg.path = j.value("path", cfg.path);
        cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
        cfg.bos_text = j.value("bos", cfg.bos_text);
        cfg.vocab_size = j.at("vocab_size").get<std::uint32_t>();
        cfg.max_retries = j.value("max_retries", cfg.max_retries);
        cfg.concurrency = std::max(1u, j.value("concurrency", cfg.concurrency));
        cfg.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", cfg.backoff_base.count()));
        cfg.timeout = std::chrono::seconds(j.value("timeout_s", cfg.timeout.count()));
        if (j.contains("vocab") && !j["vocab"].is_null())
            cfg.vocab = Vocabulary::load(j["vocab"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Config, std::string("api config: ") + e.what());
    }
    return cfg;
}

nlohmann::json api_request_body(std::string_view text, const ApiConfig& cfg) {
    return {{"model", cfg.model},
            {"prompt", cfg.bos_text + std::string(text)},
            {"max_tokens", 0},
            {"temperature", 0},
            {"echo", true},
            {"logprobs", 0},
            {"return_tokens_as_token_ids", true}};
}

namespace {

TokenId resolve_token(const std::string& token, const ApiConfig& cfg) {
    constexpr std::string_view prefix = "token_id:";
    if (token.starts_with(prefix)) {
        TokenId id = 0;
        const char* first = token.data() + prefix.size();
        const char* last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, id);
        if (ec == std::errc{} && ptr == last) return id;
    }
    if (cfg.vocab) {
        if (auto id = cfg.vocab->find(token)) return *id;
        throw Error(ErrorKind::UnknownToken, "API token '" + token + "' not in configured vocabulary");
    }
    throw Error(ErrorKind::SchemaError, "API token '" + token + "' carries no id and no vocabulary is configured");
}

}  // namespace

LogprobRecord parse_api_response(const nlohmann::json& response, std::string doc_id, std::string_view text,
                                 const ApiConfig& cfg) {
    LogprobRecord record;
    record.doc_id = std::move(doc_id);
    record.vocab_size = cfg.vocab_size;
    record.provider = "api/" + cfg.model;
    try {
        const auto& lp = response.at("choices").at(0).at("logprobs");
        const auto& tokens = lp.at("tokens");
        const auto& logprobs = lp.at("token_logprobs");
        if (logprobs.size() < tokens.size())
            throw Error(ErrorKind::TruncatedResponse, std::to_string(logprobs.size()) + " logprobs for " +
                                                          std::to_string(tokens.size()) + " tokens");
        const bool has_offsets = lp.contains("text_offset") && lp["text_offset"].is_array() &&
                                 lp["text_offset"].size() == tokens.size();
        const auto prompt_end = cfg.bos_text.size() + text.size();
        std::uint32_t position = 0;
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            if (has_offsets) {
                const auto offset = lp["text_offset"][k].get<std::size_t>();
                if (offset < cfg.bos_text.size()) continue;  // x_0
                if (offset >= prompt_end) break;             // generated, not echoed
            } else if (k == 0 && !cfg.bos_text.empty()) {
                continue;
            }
            if (logprobs[k].is_null())
                throw Error(ErrorKind::TruncatedResponse, "missing logprob at token " + std::to_string(k));
            const auto id = resolve_token(tokens[k].get<std::string>(), cfg);
            record.events.push_back(TokenEvent::from_logprob(++position, id, logprobs[k].get<double>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaError, record.doc_id + ": malformed completions response: " + e.what());
    }
    if (!text.empty() && record.events.empty())
        throw Error(ErrorKind::TruncatedResponse, record.doc_id + ": response carries no scored tokens");
    validate(record);
    return record;
}

LogprobRecord fetch_api(std::string doc_id, std::string_view text, const ApiConfig& cfg, FetchStats* stats) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (!key || !*key) throw Error(ErrorKind::AuthFailure, "environment variable " + cfg.api_key_env + " is not set");
    if (cfg.vocab_size == 0) throw Error(ErrorKind::Config, "api config must declare vocab_size");

    httplib::Client client(cfg.endpoint);
    client.set_connection_timeout(cfg.timeout);
    client.set_read_timeout(cfg.timeout);
    client.set_write_timeout(cfg.timeout);
    const httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
    const auto body = api_request_body(text, cfg).dump();

    std::string last_error;
    for (unsigned attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            const std::chrono::milliseconds delay =
                std::min(cfg.backoff_cap, cfg.backoff_base * (std::int64_t{1} << std::min(attempt - 1, 20u)));
            std::clog << "pdd: retry " << attempt << "/" << cfg.max_retries << " for " << doc_id << " after "
                      << last_error << "\n";
            if (stats) ++stats->retries;
            std::this_thread::sleep_for(delay);
        }
        if (stats) ++stats->requests;
        auto res = client.Post(cfg.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw Error(ErrorKind::AuthFailure, "HTTP " + std::to_string(res->status) + " from " + cfg.endpoint);
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw Error(ErrorKind::Transport, "HTTP " + std::to_string(res->status) + ": " + res->body);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::SchemaError, doc_id + ": response is not JSON: " + e.what());
        }
        return parse_api_response(parsed, std::move(doc_id), text, cfg);
    }
    throw Error(ErrorKind::Transport, doc_id + ": giving up after " + std::to_string(cfg.max_retries) +
                                          " retries, last: " + last_error);
}

BatchResult fetch_api_batch(std::span<const Document> docs, const ApiConfig& cfg, FetchStats* stats) {
    BatchResult out;
    out.records.resize(docs.size());
    out.errors.resize(docs.size());
    std::atomic<std::size_t> next{0};
    const auto workers = std::min<std::size_t>(std::max(1u, cfg.concurrency), docs.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k; (k = next++) < docs.size();) {
                try {
                    out.records[k] = fetch_api(docs[k].doc_id, docs[k].text, cfg, stats);
                } catch (...) {
                    out.errors[k] = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    return out;
}

}  // namespace pdd
