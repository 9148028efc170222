#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pdd {

using TokenId = std::uint32_t;
using TokenSequence = std::vector<TokenId>;

enum class Scheme {
    Whitespace,   // split on runs of Unicode whitespace, look each word up
    Byte,         // one token per byte, id = byte value
    ExternalMap,  // greedy longest match of vocabulary surface strings
};

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme) noexcept;

// Dense bijection between surface strings and ids [0, size()).
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> entries,
                        std::optional<TokenId> bos_id = std::nullopt,
                        std::optional<TokenId> unk_id = std::nullopt);

    // 256 single-byte entries, plus a trailing "<s>" entry used as BOS when
    // with_bos is set.
    static Vocabulary bytes(bool with_bos = false);

    // Line-oriented file: one surface string per line, line index = id.
    // Optional leading header lines `#bos=<id>` and `#unk=<id>`.
    static Vocabulary load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<std::string>& entries() const noexcept { return entries_; }
    const std::string& surface(TokenId id) const;
    std::optional<TokenId> find(std::string_view piece) const;
    std::optional<TokenId> bos_id() const noexcept { return bos_id_; }
    // Whitespace words absent from the vocabulary map here when set;
    // otherwise they are an UnknownToken error.
    std::optional<TokenId> unk_id() const noexcept { return unk_id_; }
    std::size_t max_piece_bytes() const noexcept { return max_piece_bytes_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.entries_ == b.entries_ && a.bos_id_ == b.bos_id_ && a.unk_id_ == b.unk_id_;
    }

private:
    struct PieceHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<std::string> entries_;
    std::unordered_map<std::string, TokenId, PieceHash, std::equal_to<>> index_;
    std::optional<TokenId> bos_id_;
    std::optional<TokenId> unk_id_;
    std::size_t max_piece_bytes_ = 0;
};

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab, Scheme scheme);

// Appends to `out` instead of allocating; used by the corpus counters.
void tokenize_append(std::string_view text, const Vocabulary& vocab, Scheme scheme,
                     TokenSequence& out);

std::string detokenize(const TokenSequence& ids, const Vocabulary& vocab, Scheme scheme);

// Splits on runs of Unicode whitespace; empty pieces are never produced.
std::vector<std::string_view> split_whitespace(std::string_view text);

struct LoweredText {
    std::string lowered;
    bool changed = false;
};

// Full Unicode lowercase mapping (root locale).
LoweredText lowercase_transform(std::string_view text);

}  // namespace pdd
