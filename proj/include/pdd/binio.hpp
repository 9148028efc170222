#pragma once

// Little-endian byte packing shared by the table and model containers.

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "pdd/error.hpp"

namespace pdd::binio {

// FNV-1a, 64-bit.
inline std::uint64_t checksum(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    void bytes(std::string_view s) { buf_.append(s); }

    template <typename T>
    void le(T value) {
        static_assert(std::is_unsigned_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i)
            buf_.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
    }

    void str(std::string_view s) {
        le(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }

    // Appends the checksum of everything written so far.
    void seal() { le(checksum(buf_)); }

    const std::string& data() const noexcept { return buf_; }
    std::string take() noexcept { return std::move(buf_); }

private:
    std::string buf_;
};

class Reader {
public:
    // Verifies magic and trailing checksum up front; the reader then walks
    // the payload between them.
    Reader(std::string_view data, std::string_view magic, ErrorKind on_error)
        : data_(data), on_error_(on_error) {
        if (data.size() < magic.size() + 8 || data.substr(0, magic.size()) != magic)
            fail("bad magic or truncated header");
        const auto body = data.substr(0, data.size() - 8);
        Reader tail(data.substr(data.size() - 8), on_error);
        if (tail.le<std::uint64_t>() != checksum(body)) fail("checksum mismatch");
        data_ = body;
        pos_ = magic.size();
    }

    template <typename T>
    T le() {
        need(sizeof(T));
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            value |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        return value;
    }

    std::string str() {
        const auto n = le<std::uint32_t>();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool done() const noexcept { return pos_ == data_.size(); }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw Error(on_error_, what); }

private:
    Reader(std::string_view data, ErrorKind on_error) : data_(data), on_error_(on_error) {}

    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) fail("truncated payload");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
    ErrorKind on_error_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace pdd::binio
