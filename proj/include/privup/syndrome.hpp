#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "privup/bits.hpp"
#include "privup/codes.hpp"

namespace privup {

struct Syndrome {
    BitWord bits;
    std::uint64_t code_id = 0;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Syndrome syndrome_of(const LinearCode& code, const BitWord& w) {
    if (w.size() != code.n) throw std::invalid_argument("syndrome_of: word length mismatch");
    return Syndrome{mat_vec_mul(code.parity_check, w), code.id()};
}

namespace detail {

// Unique decoding within radius max_weight needs distance >= 2*max_weight+1;
// when the radius already covers the whole space the analytic cap n+1 is
// enough.
inline void require_decoding_radius(const LinearCode& code, std::size_t max_weight,
                                    const char* who) {
    std::size_t needed = 2 * max_weight + 1;
    if (needed > code.n + 1) needed = code.n + 1;
    if (code.certified_distance < needed)
        throw std::invalid_argument(std::string(who) + ": certified distance too small for this radius");
}

}  // namespace detail

// Minimum-weight word with the given syndrome, searching weights 0..max_weight
// in the fixed enumeration order. Uniqueness within the radius is guaranteed
// by the certified distance, which is checked, not assumed.
inline std::optional<BitWord> coset_leader(const LinearCode& code, const Syndrome& s,
                                           std::size_t max_weight) {
    if (s.code_id != code.id()) throw std::invalid_argument("coset_leader: syndrome is for a different code");
    if (s.bits.size() != code.syndrome_length())
        throw std::invalid_argument("coset_leader: syndrome length mismatch");
    detail::require_decoding_radius(code, max_weight, "coset_leader");
    std::optional<BitWord> found;
    for_each_word_of_weight_at_most(code.n, max_weight, [&](const BitWord& e) {
        if (mat_vec_mul(code.parity_check, e) == s.bits) {
            found = e;
            return false;
        }
        return true;
    });
    return found;
}

struct DecodeResult {
    BitWord updated;
    std::vector<std::size_t> flip_positions;
    std::size_t flip_count = 0;
};

// Reconciles a stale copy against the fresh word's syndrome: the difference
// pattern is the coset leader of (fresh syndrome + stale syndrome). Throws
// DecodeError when no pattern within the radius exists, which is how stale
// copies beyond max_flips announce themselves (when they do not silently
// decode to a wrong word, which a radius violation permits).
inline DecodeResult update_decode(const LinearCode& code, const BitWord& stale, const Syndrome& fresh,
                                  std::size_t max_flips) {
    if (stale.size() != code.n) throw std::invalid_argument("update_decode: word length mismatch");
    if (fresh.code_id != code.id())
        throw std::invalid_argument("update_decode: syndrome is for a different code");
    if (fresh.bits.size() != code.syndrome_length())
        throw std::invalid_argument("update_decode: syndrome length mismatch");
    detail::require_decoding_radius(code, max_flips, "update_decode");

    Syndrome rel{fresh.bits ^ mat_vec_mul(code.parity_check, stale), fresh.code_id};
    std::optional<BitWord> leader = coset_leader(code, rel, max_flips);
    if (!leader) throw DecodeError("update_decode: no flip pattern within radius matches the syndrome");

    DecodeResult res;
    res.updated = stale ^ *leader;
    res.flip_positions = leader->support();
    res.flip_count = res.flip_positions.size();
    return res;
}

// Precomputed syndrome -> coset leader map for every reachable syndrome.
// Produces bit-identical answers to coset_leader; only worthwhile when the
// syndrome space is small.
class CosetLeaderTable {
public:
    CosetLeaderTable(const LinearCode& code, std::size_t max_weight)
        : code_id_(code.id()), syndrome_len_(code.syndrome_length()) {
        if (syndrome_len_ > 20)
            throw std::invalid_argument("coset leader table: syndrome space too large to tabulate");
        detail::require_decoding_radius(code, max_weight, "coset leader table");
        table_.assign(std::size_t{1} << syndrome_len_, std::nullopt);
        for_each_word_of_weight_at_most(code.n, max_weight, [&](const BitWord& e) {
            std::uint64_t key = mat_vec_mul(code.parity_check, e).as_key();
            if (!table_[key]) table_[key] = e;
            return true;
        });
    }

    std::optional<BitWord> lookup(const Syndrome& s) const {
        if (s.code_id != code_id_) throw std::invalid_argument("coset leader table: syndrome is for a different code");
        if (s.bits.size() != syndrome_len_)
            throw std::invalid_argument("coset leader table: syndrome length mismatch");
        return table_[s.bits.as_key()];
    }

private:
    std::uint64_t code_id_;
    std::size_t syndrome_len_;
    std::vector<std::optional<BitWord>> table_;
};

}  // namespace privup
