#include "pdd/tokenizer.hpp"

#include <unicode/uchar.h>
#include <unicode/ucasemap.h>
#include <unicode/utf8.h>

#include <charconv>
#include <fstream>
#include <memory>

#include "pdd/error.hpp"

namespace pdd {

Scheme parse_scheme(std::string_view name) {
    if (name == "whitespace") return Scheme::Whitespace;
    if (name == "byte") return Scheme::Byte;
    if (name == "external-map") return Scheme::ExternalMap;
    throw Error(ErrorKind::Config, "unknown tokenization scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::Whitespace: return "whitespace";
        case Scheme::Byte: return "byte";
        case Scheme::ExternalMap: return "external-map";
    }
    return "?";
}

Vocabulary::Vocabulary(std::vector<std::string> entries, std::optional<TokenId> bos_id,
                       std::optional<TokenId> unk_id)
    : entries_(std::move(entries)), bos_id_(bos_id), unk_id_(unk_id) {
    if (bos_id_ && *bos_id_ >= entries_.size())
        throw Error(ErrorKind::TokenOutOfRange, "bos id " + std::to_string(*bos_id_) +
                                                    " outside vocabulary of size " +
                                                    std::to_string(entries_.size()));
    if (unk_id_ && *unk_id_ >= entries_.size())
        throw Error(ErrorKind::TokenOutOfRange, "unk id " + std::to_string(*unk_id_) +
                                                    " outside vocabulary of size " +
                                                    std::to_string(entries_.size()));
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto [it, inserted] = index_.emplace(entries_[i], static_cast<TokenId>(i));
        if (!inserted)
            throw Error(ErrorKind::SchemaError, "duplicate vocabulary entry '" + entries_[i] +
                                                    "' at ids " + std::to_string(it->second) +
                                                    " and " + std::to_string(i));
        max_piece_bytes_ = std::max(max_piece_bytes_, entries_[i].size());
    }
}

Vocabulary Vocabulary::bytes(bool with_bos) {
    std::vector<std::string> entries;
    entries.reserve(257);
    for (int b = 0; b < 256; ++b) entries.emplace_back(1, static_cast<char>(b));
    std::optional<TokenId> bos;
    if (with_bos) {
        entries.emplace_back("<s>");
        bos = 256;
    }
    return Vocabulary(std::move(entries), bos);
}

namespace {

std::optional<TokenId> parse_header(std::string_view line, std::string_view key) {
    if (!line.starts_with(key)) return std::nullopt;
    line.remove_prefix(key.size());
    TokenId id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), id);
    if (ec != std::errc{} || ptr != line.data() + line.size()) return std::nullopt;
    return id;
}

}  // namespace

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open vocabulary file " + path.string());
    std::vector<std::string> entries;
    std::optional<TokenId> bos, unk;
    std::string line;
    bool in_header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (in_header) {
            if (auto id = parse_header(line, "#bos=")) {
                bos = id;
                continue;
            }
            if (auto id = parse_header(line, "#unk=")) {
                unk = id;
                continue;
            }
            in_header = false;
        }
        entries.push_back(line);
    }
    if (entries.empty()) throw Error(ErrorKind::EmptyVocabulary, path.string() + " has no entries");
    return Vocabulary(std::move(entries), bos, unk);
}

void Vocabulary::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write vocabulary file " + path.string());
    if (bos_id_) out << "#bos=" << *bos_id_ << '\n';
    if (unk_id_) out << "#unk=" << *unk_id_ << '\n';
    for (const auto& e : entries_) {
        if (e.find('\n') != std::string::npos)
            throw Error(ErrorKind::Io, "vocabulary entry contains a newline; not representable");
        out << e << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

const std::string& Vocabulary::surface(TokenId id) const {
    if (id >= entries_.size())
        throw Error(ErrorKind::TokenOutOfRange,
                    std::to_string(id) + " >= vocabulary size " + std::to_string(entries_.size()));
    return entries_[id];
}

std::optional<TokenId> Vocabulary::find(std::string_view piece) const {
    auto it = index_.find(piece);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Visits maximal non-whitespace runs of a UTF-8 string.
template <typename F>
void for_each_word(std::string_view text, F&& visit) {
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    int32_t word_start = -1;
    while (i < length) {
        const int32_t char_start = i;
        bool space;
        if (s[i] < 0x80) {
            space = is_ascii_space(s[i]);
            ++i;
        } else {
            UChar32 c;
            U8_NEXT(s, i, length, c);
            space = c >= 0 && u_isUWhiteSpace(c);
        }
        if (space) {
            if (word_start >= 0) {
                visit(text.substr(word_start, char_start - word_start));
                word_start = -1;
            }
        } else if (word_start < 0) {
            word_start = char_start;
        }
    }
    if (word_start >= 0) visit(text.substr(word_start));
}

}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> words;
    for_each_word(text, [&](std::string_view w) { words.push_back(w); });
    return words;
}

void tokenize_append(std::string_view text, const Vocabulary& vocab, Scheme scheme,
                     TokenSequence& out) {
    if (vocab.empty()) throw Error(ErrorKind::EmptyVocabulary, "cannot tokenize against an empty vocabulary");
    switch (scheme) {
        case Scheme::Byte:
            if (vocab.size() < 256)
                throw Error(ErrorKind::VocabMismatch, "byte scheme needs at least 256 entries, vocabulary has " +
                                                          std::to_string(vocab.size()));
            for (unsigned char c : text) out.push_back(c);
            return;
        case Scheme::Whitespace:
            for_each_word(text, [&](std::string_view word) {
                if (auto id = vocab.find(word)) {
                    out.push_back(*id);
                } else if (vocab.unk_id()) {
                    out.push_back(*vocab.unk_id());
                } else {
                    throw Error(ErrorKind::UnknownToken, "word '" + std::string(word) + "' not in vocabulary");
                }
            });
            return;
        case Scheme::ExternalMap: {
            std::size_t pos = 0;
            while (pos < text.size()) {
                std::size_t len = std::min(vocab.max_piece_bytes(), text.size() - pos);
                std::optional<TokenId> hit;
                for (; len > 0; --len) {
                    if ((hit = vocab.find(text.substr(pos, len)))) break;
                }
                if (!hit)
                    throw Error(ErrorKind::UnknownToken, "no vocabulary piece matches at byte " +
                                                             std::to_string(pos));
                out.push_back(*hit);
                pos += len;
            }
            return;
        }
    }
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab, Scheme scheme) {
    TokenSequence ids;
    tokenize_append(text, vocab, scheme, ids);
    return ids;
}

std::string detokenize(const TokenSequence& ids, const Vocabulary& vocab, Scheme scheme) {
    std::string text;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (scheme == Scheme::Byte) {
            if (ids[i] > 255)
                throw Error(ErrorKind::TokenOutOfRange, "byte id " + std::to_string(ids[i]));
            text.push_back(static_cast<char>(ids[i]));
            continue;
        }
        if (scheme == Scheme::Whitespace && i > 0) text.push_back(' ');
        text += vocab.surface(ids[i]);
    }
    return text;
}

LoweredText lowercase_transform(std::string_view text) {
    if (text.empty()) return {};
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<UCaseMap, decltype(&ucasemap_close)> map(ucasemap_open("", 0, &status),
                                                             &ucasemap_close);
    if (U_FAILURE(status)) throw Error(ErrorKind::Config, u_errorName(status));

    std::string lowered(text.size(), '\0');
    auto n = ucasemap_utf8ToLower(map.get(), lowered.data(), static_cast<int32_t>(lowered.size()),
                                  text.data(), static_cast<int32_t>(text.size()), &status);
    if (status == U_BUFFER_OVERFLOW_ERROR) {
        status = U_ZERO_ERROR;
        lowered.assign(static_cast<std::size_t>(n), '\0');
        n = ucasemap_utf8ToLower(map.get(), lowered.data(), n, text.data(),
                                 static_cast<int32_t>(text.size()), &status);
    }
    if (U_FAILURE(status)) throw Error(ErrorKind::SchemaError, std::string("lowercase failed: ") + u_errorName(status));
    lowered.resize(static_cast<std::size_t>(n));
    bool changed = lowered != text;
    return {std::move(lowered), changed};
}

}  // namespace pdd
