#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "privup/bytes.hpp"
#include "privup/digest.hpp"
#include "privup/pir.hpp"

namespace privup {
namespace wire {

constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kMaxFrameSize = 1u << 20;

enum class Opcode : std::uint8_t { kHello = 1, kQuery = 2 };

enum class Status : std::uint8_t {
    kOk = 0,
    kMalformed = 1,
    kBadVersion = 2,
    kBadOpcode = 3,
    kOutOfRange = 4,
    kInternal = 5,
    kConfigMismatch = 6,
};

class WireError : public std::runtime_error {
public:
    WireError(Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    Status status() const { return status_; }

private:
    Status status_;
};

// [u32 BE length][payload]
inline Bytes frame(const Bytes& payload, std::size_t max_size = kMaxFrameSize) {
    if (payload.size() > max_size) throw WireError(Status::kMalformed, "frame exceeds size limit");
    Bytes out;
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline Bytes encode_hello_request(const Digest& digest) {
    Bytes out;
    put_u8(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(Opcode::kHello));
    out.insert(out.end(), digest.begin(), digest.end());
    return out;
}

inline Bytes encode_query_request(const std::vector<Combination>& combos) {
    Bytes out;
    put_u8(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(Opcode::kQuery));
    Bytes body = combinations_to_bytes(combos);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

struct Request {
    Opcode opcode = Opcode::kHello;
    Digest digest{};                   // HELLO
    std::vector<Combination> combos;   // QUERY
};

inline Request parse_request(const Bytes& payload) {
    ByteReader in(payload);
    try {
        std::uint8_t version = in.u8();
        if (version != kVersion) throw WireError(Status::kBadVersion, "unsupported protocol version");
        std::uint8_t op = in.u8();
        Request req;
        if (op == static_cast<std::uint8_t>(Opcode::kHello)) {
            req.opcode = Opcode::kHello;
            auto d = in.bytes(req.digest.size());
            std::copy(d.begin(), d.end(), req.digest.begin());
        } else if (op == static_cast<std::uint8_t>(Opcode::kQuery)) {
            req.opcode = Opcode::kQuery;
            req.combos = combinations_from_bytes(in);
        } else {
            throw WireError(Status::kBadOpcode, "unknown opcode");
        }
        if (!in.done()) throw WireError(Status::kMalformed, "trailing bytes in request");
        return req;
    } catch (const std::out_of_range&) {
        throw WireError(Status::kMalformed, "truncated request");
    }
}

inline Bytes encode_error(Status status) {
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(status));
    return out;
}

inline Bytes encode_hello_ok(const Digest& digest) {
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(Status::kOk));
    out.insert(out.end(), digest.begin(), digest.end());
    return out;
}

// [status=0][bit count u16 BE][answer bits packed MSB-first]
inline Bytes encode_query_ok(const std::vector<std::uint8_t>& bits) {
    if (bits.size() > 0xffff) throw WireError(Status::kInternal, "too many answer bits");
    Bytes out;
    put_u8(out, static_cast<std::uint8_t>(Status::kOk));
    put_u16_be(out, static_cast<std::uint16_t>(bits.size()));
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) acc |= static_cast<std::uint8_t>(0x80u >> (i % 8));
        if (i % 8 == 7) {
            put_u8(out, acc);
            acc = 0;
        }
    }
    if (bits.size() % 8) put_u8(out, acc);
    return out;
}

struct Response {
    Status status = Status::kOk;
    Digest digest{};                  // HELLO OK
    std::vector<std::uint8_t> bits;   // QUERY OK
};

inline Response parse_response(const Bytes& payload, Opcode expected) {
    ByteReader in(payload);
    try {
        Response resp;
        resp.status = static_cast<Status>(in.u8());
        if (resp.status != Status::kOk) {
            if (!in.done()) throw WireError(Status::kMalformed, "unexpected body on error response");
            return resp;
        }
        if (expected == Opcode::kHello) {
            auto d = in.bytes(resp.digest.size());
            std::copy(d.begin(), d.end(), resp.digest.begin());
        } else {
            std::size_t count = in.u16_be();
            auto packed = in.bytes((count + 7) / 8);
            for (std::size_t i = 0; i < count; ++i)
                resp.bits.push_back((packed[i / 8] >> (7 - i % 8)) & 1u);
            // pad bits must be zero for canonical responses
            for (std::size_t i = count; i < packed.size() * 8; ++i)
                if ((packed[i / 8] >> (7 - i % 8)) & 1u)
                    throw WireError(Status::kMalformed, "nonzero padding in response");
        }
        if (!in.done()) throw WireError(Status::kMalformed, "trailing bytes in response");
        return resp;
    } catch (const std::out_of_range&) {
        throw WireError(Status::kMalformed, "truncated response");
    }
}

}  // namespace wire
}  // namespace privup
