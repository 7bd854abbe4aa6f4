#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "privup/bits.hpp"
#include "privup/bounds.hpp"
#include "privup/bytes.hpp"
#include "privup/codes.hpp"
#include "privup/digest.hpp"
#include "privup/files.hpp"
#include "privup/pir.hpp"
#include "privup/syndrome.hpp"

namespace privup {

enum class UpdateMode : std::uint8_t {
    kBoundedFlips = 1,  // stale copy within max_flips of the fresh message
    kExactOneFlip = 2,  // stale copy differs in exactly one position
    kNaive = 3,         // ignore the stale copy, fetch the whole message
};

inline const char* to_string(UpdateMode mode) {
    switch (mode) {
        case UpdateMode::kBoundedFlips: return "bounded";
        case UpdateMode::kExactOneFlip: return "one-flip";
        case UpdateMode::kNaive: return "naive";
    }
    return "?";
}

struct SystemConfig {
    std::size_t databases = 0;    // N
    std::size_t messages = 0;     // K
    std::size_t message_len = 0;  // L
    std::size_t max_flips = 0;    // f
    CodeSpec code_spec;
    UpdateMode mode = UpdateMode::kBoundedFlips;
    std::uint64_t seed = 0;

    void validate() const {
        if (databases < 2) throw std::invalid_argument("config: at least two databases required");
        if (messages < 2 || messages > 255) throw std::invalid_argument("config: message count out of range");
        if (message_len < 1) throw std::invalid_argument("config: message length must be positive");
        if (max_flips > message_len) throw std::invalid_argument("config: max_flips exceeds message length");
        if (code_spec.message_len != message_len || code_spec.max_flips != max_flips)
            throw std::invalid_argument("config: code spec inconsistent with (message_len, max_flips)");
        if (mode == UpdateMode::kExactOneFlip && max_flips != 1)
            throw std::invalid_argument("config: one-flip mode requires max_flips = 1");
    }
};

inline SystemConfig make_config(std::size_t databases, std::size_t messages, std::size_t message_len,
                                std::size_t max_flips, UpdateMode mode = UpdateMode::kBoundedFlips,
                                std::uint64_t seed = 0,
                                CodeConstruction construction = CodeConstruction::kGreedy) {
    SystemConfig c;
    c.databases = databases;
    c.messages = messages;
    c.message_len = message_len;
    c.max_flips = max_flips;
    c.code_spec = CodeSpec{message_len, max_flips, construction, seed};
    c.mode = mode;
    c.seed = seed;
    c.validate();
    return c;
}

struct MessageLibrary {
    std::vector<BitWord> messages;

    void validate(const SystemConfig& config) const {
        if (messages.size() != config.messages) throw std::invalid_argument("library: message count mismatch");
        for (const BitWord& m : messages)
            if (m.size() != config.message_len) throw std::invalid_argument("library: message length mismatch");
    }
};

inline MessageLibrary random_library(std::size_t messages, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MessageLibrary lib;
    for (std::size_t k = 0; k < messages; ++k) {
        BitWord w(len);
        for (std::size_t i = 1; i <= len; ++i) w.set(i, rng() & 1u);
        lib.messages.push_back(std::move(w));
    }
    return lib;
}

struct UpdateInstance {
    std::size_t theta = 0;  // 1..K, known only to the user
    BitWord outdated;
    std::size_t max_flips = 0;  // promised distance bound to the fresh message
};

struct UpdateReport {
    BitWord updated;
    std::vector<std::size_t> flip_positions;
    std::size_t bits_downloaded = 0;
    BoundsReport bounds;
    bool met_upper_bound = false;
};

// Parity matrix of the one-flip scheme: bit j of the message participates in
// parity t exactly when bit t (from the most significant of the m = ceil
// log2(L) bits) of the value L-j is set. Signatures run from all-ones at
// j=1 down to all-zeros at j=L, so each position is identified uniquely.
inline BitMatrix one_flip_parity_matrix(std::size_t message_len) {
    if (message_len < 1) throw std::invalid_argument("one_flip_parity_matrix: empty message");
    unsigned m = ceil_log2(BigInt(message_len));
    BitMatrix h(m, message_len);
    for (std::size_t j = 1; j <= message_len; ++j) {
        std::uint64_t v = message_len - j;
        for (unsigned t = 1; t <= m; ++t)
            if ((v >> (m - t)) & 1u) h.set(t, j, true);
    }
    return h;
}

// The matrix every database applies to each stored message before serving.
// All three modes reduce to one linear map, which also makes the served
// record length uniform: syndrome bits, one-flip parities, or the message
// itself.
inline LinearCode effective_code(const SystemConfig& config) {
    config.validate();
    switch (config.mode) {
        case UpdateMode::kBoundedFlips:
            return code_for(config.code_spec);
        case UpdateMode::kExactOneFlip: {
            LinearCode code;
            code.parity_check = one_flip_parity_matrix(config.message_len);
            code.n = config.message_len;
            code.k = code.n - code.parity_check.rows();
            return code;
        }
        case UpdateMode::kNaive: {
            LinearCode code;
            code.n = config.message_len;
            code.k = 0;
            code.parity_check = BitMatrix::identity(code.n);
            code.certified_distance = code.n + 1;
            return code;
        }
    }
    throw std::invalid_argument("config: unknown mode");
}

// A code loaded from a file (rather than derived from the spec) may stand in
// for the derived one in bounded mode only, and must fit the message length.
inline void validate_code_for(const SystemConfig& config, const LinearCode& code) {
    if (config.mode != UpdateMode::kBoundedFlips)
        throw std::invalid_argument("config: explicit codes only apply to bounded mode");
    if (code.n != config.message_len) throw std::invalid_argument("config: code length does not match messages");
    if (code.parity_check.rows() != code.syndrome_length() || code.parity_check.cols() != code.n)
        throw std::invalid_argument("config: inconsistent code dimensions");
}

// What each database stores for serving: the effective map applied to every
// message. In naive mode this is the message itself.
inline std::vector<BitWord> db_prepare(const SystemConfig& config, const MessageLibrary& library,
                                       const LinearCode& code) {
    library.validate(config);
    std::vector<BitWord> prepared;
    prepared.reserve(library.messages.size());
    for (const BitWord& m : library.messages) prepared.push_back(mat_vec_mul(code.parity_check, m));
    return prepared;
}

inline std::vector<BitWord> db_prepare(const SystemConfig& config, const MessageLibrary& library) {
    return db_prepare(config, library, effective_code(config));
}

// Digest both sides compare before any retrieval; covers everything that
// must agree for answers to be interpretable, including the exact code in
// use (its file encoding is hashed).
inline Digest config_digest(const SystemConfig& config, const LinearCode& code) {
    Bytes buf;
    buf.insert(buf.end(), {'P', 'U', 'P', 'D'});
    put_u32_be(buf, static_cast<std::uint32_t>(config.databases));
    put_u32_be(buf, static_cast<std::uint32_t>(config.messages));
    put_u32_be(buf, static_cast<std::uint32_t>(config.message_len));
    put_u32_be(buf, static_cast<std::uint32_t>(config.max_flips));
    put_u8(buf, static_cast<std::uint8_t>(config.mode));
    Bytes code_bytes = encode_code(code);
    buf.insert(buf.end(), code_bytes.begin(), code_bytes.end());
    return sha256(buf);
}

inline Digest config_digest(const SystemConfig& config) {
    return config_digest(config, effective_code(config));
}

// Unranks the fixed enumeration of weight <= max_flips words: ascending
// weight, then ascending support. Rank must be below ball_size(len, max_flips).
inline BitWord nth_flip_pattern(std::size_t len, std::size_t max_flips, BigInt rank) {
    if (rank < 0) throw std::out_of_range("nth_flip_pattern: negative rank");
    for (std::size_t w = 0; w <= max_flips && w <= len; ++w) {
        BigInt count = binomial(len, w);
        if (rank >= count) {
            rank -= count;
            continue;
        }
        BitWord word(len);
        std::size_t prev = 0;
        for (std::size_t i = 1; i <= w; ++i) {
            for (std::size_t p = prev + 1; p <= len; ++p) {
                BigInt c = binomial(len - p, w - i);
                if (rank < c) {
                    word.set(p, true);
                    prev = p;
                    break;
                }
                rank -= c;
            }
        }
        return word;
    }
    throw std::out_of_range("nth_flip_pattern: rank exceeds pattern count");
}

// Uniform over all flip patterns of weight <= max_flips.
inline BitWord random_flip_pattern(std::size_t len, std::size_t max_flips, std::mt19937_64& rng) {
    BigInt ball = ball_size(len, max_flips);
    unsigned bits = ceil_log2(ball);
    for (;;) {
        BigInt draw = 0;
        for (unsigned got = 0; got < bits; got += 32) {
            draw <<= 32;
            draw += static_cast<std::uint32_t>(rng());
        }
        draw &= (BigInt(1) << bits) - 1;
        if (draw < ball) return nth_flip_pattern(len, max_flips, draw);
    }
}

struct SavingsReport {
    BoundsReport bounds;
    bool strict = false;  // an update can beat re-downloading at all
};

inline SavingsReport savings(const SystemConfig& config) {
    SavingsReport rep;
    rep.bounds = compute_bounds(static_cast<unsigned>(config.databases), static_cast<unsigned>(config.messages),
                                static_cast<unsigned>(config.message_len), static_cast<unsigned>(config.max_flips));
    rep.strict = 2 * config.max_flips < config.message_len;
    return rep;
}

}  // namespace privup
