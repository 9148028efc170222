#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pdd/freqdist.hpp"
#include "pdd/providers.hpp"

namespace pdd {

enum class Method { DcPdd, Ppl, Lowercase, Compression, SmallRef, MinK, MinKpp };

Method parse_method(std::string_view name);
std::string_view to_string(Method method) noexcept;

inline constexpr double kDefaultClipBound = 0.01;
inline constexpr double kDefaultKPercent = 20.0;
inline constexpr double kDefaultSigmaFloor = 1e-10;
inline constexpr int kCompressionLevel = 6;

struct DcPddConfig {
    const FrequencyTable* table = nullptr;
    double clip_bound = kDefaultClipBound;
};

// Every method is oriented so that a higher value means "more likely a
// member"; perplexity-style scores are negated.
struct DetectionScore {
    std::string doc_id;
    Method method = Method::DcPdd;
    double value = 0.0;
    std::map<std::string, double> extras;
};

struct Decision {
    std::string doc_id;
    double threshold = 0.0;
    bool is_member = false;
};

// beta = mean over first-occurrence positions of min(a, -p(x_i; M) ln p(x_i; D')).
DetectionScore dcpdd_score(const LogprobRecord& record, const DcPddConfig& cfg);

double perplexity(const LogprobRecord& record);

DetectionScore ppl_score(const LogprobRecord& record);

// -(PPL(x) / PPL(lower(x))); NotApplicable when lowercasing changed nothing.
DetectionScore lowercase_score(const LogprobRecord& record, const LogprobRecord& lowered, bool changed);

// Deflate (zlib container, level 6) size of raw_text in bits.
std::uint64_t zlib_entropy_bits(std::string_view raw_text);

// -(PPL(x) / zlib entropy bits).
DetectionScore compression_score(const LogprobRecord& record, std::string_view raw_text);

// -(PPL under the target / PPL under the reference model).
DetectionScore small_ref_score(const LogprobRecord& record, const LogprobRecord& reference);

// Number of positions the Min-K variants average: max(1, floor(n k / 100)).
std::size_t min_k_count(std::size_t n, double k_percent);

DetectionScore mink_score(const LogprobRecord& record, double k_percent = kDefaultKPercent);

DetectionScore minkpp_score(const LogprobRecord& record, double k_percent = kDefaultKPercent,
                            double sigma_floor = kDefaultSigmaFloor);

// Member iff value >= threshold.
Decision decide(const DetectionScore& score, double threshold);

}  // namespace pdd
