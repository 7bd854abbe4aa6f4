#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "privup/bits.hpp"
#include "privup/bytes.hpp"
#include "privup/codes.hpp"

namespace privup {

class FileFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void expect_magic(ByteReader& in, const char* magic) {
    auto got = in.bytes(4);
    for (int i = 0; i < 4; ++i)
        if (got[i] != static_cast<std::uint8_t>(magic[i]))
            throw FileFormatError(std::string("bad magic, expected ") + magic);
}

inline void check_row_padding(const BitWord& w, std::span<const std::uint8_t> packed) {
    // unpack() ignores pad bits; reject files where they are nonzero
    if (w.packed() != std::vector<std::uint8_t>(packed.begin(), packed.end()))
        throw FileFormatError("nonzero padding bits");
}

}  // namespace detail

// Code file, magic "PUCD": [magic(4)] [version u8=1] [n u32 BE] [k u32 BE]
// [(n-k) parity-check rows, each n bits packed MSB-first, zero-padded].
inline Bytes encode_code(const LinearCode& code) {
    Bytes out;
    out.insert(out.end(), {'P', 'U', 'C', 'D'});
    put_u8(out, 1);
    put_u32_be(out, static_cast<std::uint32_t>(code.n));
    put_u32_be(out, static_cast<std::uint32_t>(code.k));
    for (std::size_t r = 1; r <= code.parity_check.rows(); ++r) {
        auto packed = code.parity_check.row(r).packed();
        out.insert(out.end(), packed.begin(), packed.end());
    }
    return out;
}

inline LinearCode decode_code(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    try {
        detail::expect_magic(in, "PUCD");
        if (in.u8() != 1) throw FileFormatError("unsupported code file version");
        std::uint32_t n = in.u32_be();
        std::uint32_t k = in.u32_be();
        if (n < 1 || k > n) throw FileFormatError("invalid code dimensions");
        LinearCode code;
        code.n = n;
        code.k = k;
        std::vector<BitWord> rows;
        for (std::uint32_t r = 0; r < n - k; ++r) {
            auto packed = in.bytes((n + 7) / 8);
            BitWord row = BitWord::unpack(n, packed);
            detail::check_row_padding(row, packed);
            rows.push_back(std::move(row));
        }
        if (!in.done()) throw FileFormatError("trailing bytes in code file");
        code.parity_check = BitMatrix::from_rows(std::move(rows), n);
        return code;
    } catch (const std::out_of_range&) {
        throw FileFormatError("truncated code file");
    }
}

// Library file, magic "PULB": [magic(4)] [version u8=1] [K u32 BE] [L u32 BE]
// [K message payloads, each L bits packed MSB-first, zero-padded].
inline Bytes encode_library(const std::vector<BitWord>& messages) {
    Bytes out;
    out.insert(out.end(), {'P', 'U', 'L', 'B'});
    put_u8(out, 1);
    put_u32_be(out, static_cast<std::uint32_t>(messages.size()));
    std::size_t len = messages.empty() ? 0 : messages[0].size();
    put_u32_be(out, static_cast<std::uint32_t>(len));
    for (const BitWord& m : messages) {
        if (m.size() != len) throw std::invalid_argument("library: uneven message lengths");
        auto packed = m.packed();
        out.insert(out.end(), packed.begin(), packed.end());
    }
    return out;
}

inline std::vector<BitWord> decode_library(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    try {
        detail::expect_magic(in, "PULB");
        if (in.u8() != 1) throw FileFormatError("unsupported library file version");
        std::uint32_t count = in.u32_be();
        std::uint32_t len = in.u32_be();
        std::vector<BitWord> messages;
        for (std::uint32_t i = 0; i < count; ++i) {
            auto packed = in.bytes((len + 7) / 8);
            BitWord m = BitWord::unpack(len, packed);
            detail::check_row_padding(m, packed);
            messages.push_back(std::move(m));
        }
        if (!in.done()) throw FileFormatError("trailing bytes in library file");
        return messages;
    } catch (const std::out_of_range&) {
        throw FileFormatError("truncated library file");
    }
}

inline Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const Bytes& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace privup
