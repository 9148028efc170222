#include "pdd/freqdist.hpp"

#include <algorithm>
#include <fstream>
#include <thread>

#include "pdd/binio.hpp"
#include "pdd/error.hpp"

namespace pdd {

namespace {

constexpr std::string_view kMagic = "FQT1";

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw Error(ErrorKind::CountOverflow, "64-bit counter overflow");
    return out;
}

}  // namespace

FrequencyTable::FrequencyTable(std::uint32_t vocab_size, std::string corpus_tag)
    : counts_(vocab_size, 0), corpus_tag_(std::move(corpus_tag)) {
    if (vocab_size == 0) throw Error(ErrorKind::EmptyVocabulary, "frequency table needs |V| > 0");
}

FrequencyTable FrequencyTable::from_counts(std::vector<std::uint64_t> counts, std::string corpus_tag) {
    if (counts.empty()) throw Error(ErrorKind::EmptyVocabulary, "frequency table needs |V| > 0");
    FrequencyTable t;
    t.total_ = 0;
    for (auto c : counts) t.total_ = checked_add(t.total_, c);
    t.counts_ = std::move(counts);
    t.corpus_tag_ = std::move(corpus_tag);
    return t;
}

std::uint64_t FrequencyTable::count(TokenId id) const {
    if (id >= counts_.size())
        throw Error(ErrorKind::TokenOutOfRange,
                    std::to_string(id) + " >= |V| " + std::to_string(counts_.size()));
    return counts_[id];
}

std::uint64_t FrequencyTable::distinct() const noexcept {
    return static_cast<std::uint64_t>(std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c != 0; }));
}

void FrequencyTable::add(TokenId id, std::uint64_t n) {
    if (id >= counts_.size())
        throw Error(ErrorKind::TokenOutOfRange,
                    std::to_string(id) + " >= |V| " + std::to_string(counts_.size()));
    const auto total = checked_add(total_, n);
    counts_[id] = checked_add(counts_[id], n);
    total_ = total;
}

void FrequencyTable::add(std::span<const TokenId> ids) {
    for (auto id : ids) add(id);
}

FrequencyTable merge(const FrequencyTable& a, const FrequencyTable& b) {
    if (a.vocab_size() != b.vocab_size())
        throw Error(ErrorKind::VocabMismatch, "merging tables with |V| " + std::to_string(a.vocab_size()) +
                                                  " and " + std::to_string(b.vocab_size()));
    std::vector<std::uint64_t> counts(a.vocab_size());
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = checked_add(a.counts()[i], b.counts()[i]);
    return FrequencyTable::from_counts(std::move(counts), a.corpus_tag().empty() ? b.corpus_tag() : a.corpus_tag());
}

double smoothed_prob(const FrequencyTable& table, TokenId id) {
    return smoothed_prob(table, id, table.vocab_size());
}

double smoothed_prob(const FrequencyTable& table, TokenId id, std::uint32_t model_vocab_size) {
    if (model_vocab_size < table.vocab_size())
        throw Error(ErrorKind::VocabMismatch, "model |V| " + std::to_string(model_vocab_size) +
                                                  " smaller than table |V| " + std::to_string(table.vocab_size()));
    if (id >= model_vocab_size)
        throw Error(ErrorKind::TokenOutOfRange,
                    std::to_string(id) + " >= |V| " + std::to_string(model_vocab_size));
    const std::uint64_t c = id < table.vocab_size() ? table.counts()[id] : 0;
    return (static_cast<double>(c) + 1.0) /
           (static_cast<double>(table.total()) + static_cast<double>(model_vocab_size));
}

FrequencyTable build(std::span<const std::string> documents, const Vocabulary& vocab, Scheme scheme,
                     unsigned jobs) {
    if (vocab.empty()) throw Error(ErrorKind::EmptyVocabulary, "cannot count against an empty vocabulary");
    const auto V = static_cast<std::uint32_t>(vocab.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, documents.size()))));

    auto count_range = [&](std::size_t begin, std::size_t end) {
        FrequencyTable part(V);
        TokenSequence ids;
        for (std::size_t i = begin; i < end; ++i) {
            ids.clear();
            tokenize_append(documents[i], vocab, scheme, ids);
            part.add(ids);
        }
        return part;
    };

    if (jobs == 1) return count_range(0, documents.size());

    std::vector<FrequencyTable> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::jthread> workers;
    const std::size_t chunk = (documents.size() + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                const auto begin = std::min(documents.size(), w * chunk);
                parts[w] = count_range(begin, std::min(documents.size(), begin + chunk));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    FrequencyTable out(V);
    for (const auto& p : parts) out = merge(out, p);
    return out;
}

namespace {

// Counts every line whose first byte lies in [begin, end).
FrequencyTable count_file_range(const std::filesystem::path& corpus, std::uint64_t begin, std::uint64_t end,
                                const Vocabulary& vocab, Scheme scheme) {
    FrequencyTable part(static_cast<std::uint32_t>(vocab.size()));
    std::ifstream in(corpus, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open corpus " + corpus.string());
    std::string line;
    std::uint64_t pos = begin;
    if (begin > 0) {
        in.seekg(static_cast<std::streamoff>(begin - 1));
        char prev = 0;
        in.get(prev);
        if (prev != '\n') {
            std::getline(in, line);
            pos += line.size() + 1;
        }
    }
    TokenSequence ids;
    while (pos < end && std::getline(in, line)) {
        pos += line.size() + 1;
        ids.clear();
        tokenize_append(line, vocab, scheme, ids);
        part.add(ids);
    }
    return part;
}

}  // namespace

FrequencyTable build_from_file(const std::filesystem::path& corpus, const Vocabulary& vocab, Scheme scheme,
                               unsigned jobs) {
    if (vocab.empty()) throw Error(ErrorKind::EmptyVocabulary, "cannot count against an empty vocabulary");
    std::error_code ec;
    const std::uint64_t size = std::filesystem::file_size(corpus, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot stat corpus " + corpus.string() + ": " + ec.message());
    jobs = std::max(1u, jobs);
    if (size < jobs) jobs = 1;

    std::vector<FrequencyTable> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    const std::uint64_t begin = size * w / jobs;
                    const std::uint64_t end = size * (w + 1) / jobs;
                    parts[w] = count_file_range(corpus, begin, end, vocab, scheme);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    FrequencyTable out = parts[0];
    for (unsigned w = 1; w < jobs; ++w) out = merge(out, parts[w]);
    out.set_corpus_tag(corpus.stem().string());
    return out;
}

std::string serialize(const FrequencyTable& table) {
    binio::Writer w;
    w.bytes(kMagic);
    w.le(table.vocab_size());
    w.le(table.total());
    w.le(table.distinct());
    for (std::uint32_t id = 0; id < table.vocab_size(); ++id) {
        if (const auto c = table.counts()[id]; c != 0) {
            w.le(id);
            w.le(c);
        }
    }
    w.seal();
    return w.take();
}

FrequencyTable deserialize_table(std::string_view bytes) {
    binio::Reader r(bytes, kMagic, ErrorKind::CorruptTable);
    const auto vocab_size = r.le<std::uint32_t>();
    const auto total = r.le<std::uint64_t>();
    const auto entries = r.le<std::uint64_t>();
    if (vocab_size == 0) r.fail("zero vocabulary size");
    if (entries > vocab_size || r.remaining() != entries * 12) r.fail("entry count disagrees with payload size");
    std::vector<std::uint64_t> counts(vocab_size, 0);
    std::int64_t prev = -1;
    for (std::uint64_t e = 0; e < entries; ++e) {
        const auto id = r.le<std::uint32_t>();
        const auto c = r.le<std::uint64_t>();
        if (id >= vocab_size || static_cast<std::int64_t>(id) <= prev) r.fail("entry ids unsorted or out of range");
        counts[id] = c;
        prev = id;
    }
    auto table = FrequencyTable::from_counts(std::move(counts));
    if (table.total() != total) r.fail("stored N' disagrees with the sum of counts");
    return table;
}

void save(const FrequencyTable& table, const std::filesystem::path& path) {
    binio::write_file(path.string(), serialize(table));
}

FrequencyTable load_table(const std::filesystem::path& path) {
    auto table = deserialize_table(binio::read_file(path.string()));
    table.set_corpus_tag(path.stem().string());
    return table;
}

}  // namespace pdd
