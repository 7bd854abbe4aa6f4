#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "privup/bits.hpp"
#include "privup/bounds.hpp"

namespace privup {

// Binary linear [n, k] code described by its (n-k) x n parity-check matrix.
// certified_distance is a verified fact, not an aspiration: the library only
// raises it after checking that no nonzero word of lower weight lies in the
// kernel of the parity check (or when the structure makes that analytic, as
// for repetition and identity checks).
struct LinearCode {
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix parity_check;
    std::optional<BitMatrix> generator;
    std::size_t certified_distance = 1;

    std::size_t syndrome_length() const { return n - k; }

    // Stable fingerprint of (n, k, parity check); used to reject syndromes
    // produced against a different code.
    std::uint64_t id() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 1099511628211ull;
            }
        };
        mix(n);
        mix(k);
        for (std::size_t r = 1; r <= parity_check.rows(); ++r)
            for (std::size_t c = 1; c <= parity_check.cols(); ++c) mix(parity_check.at(r, c) ? 0x9e : 0x31);
        return h;
    }
};

enum class CodeConstruction : std::uint8_t {
    kRepetition = 1,
    kFiveBitDemo = 2,   // the fixed [5,2,3] code used by the worked examples
    kGreedy = 3,        // greedy parity-check column search
};

struct CodeSpec {
    std::size_t message_len = 0;  // n of the resulting code
    std::size_t max_flips = 0;    // decoding radius the code must support
    CodeConstruction construction = CodeConstruction::kGreedy;
    std::uint64_t seed = 0;

    friend bool operator==(const CodeSpec&, const CodeSpec&) = default;
};

class CodeConstructionError : public std::runtime_error {
public:
    enum class Reason { kInfeasible, kBudgetExhausted };

    CodeConstructionError(Reason reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}

    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

// Verifies that the code has minimum distance >= d by enumerating every
// nonzero word of weight < d and checking its syndrome is nonzero. On
// success the code's certified_distance is raised to d.
inline bool certify_distance(LinearCode& code, std::size_t d) {
    if (d < 1 || d > code.n + 1) throw std::invalid_argument("certify_distance: d out of range");
    bool ok = true;
    for_each_word_of_weight_at_most(code.n, d - 1, [&](const BitWord& w) {
        if (w.is_zero()) return true;
        if (mat_vec_mul(code.parity_check, w).is_zero()) {
            ok = false;
            return false;
        }
        return true;
    });
    if (ok && d > code.certified_distance) code.certified_distance = d;
    return ok;
}

// [n, 1, n] repetition code; parity check rows are x1 + x(i+1).
inline LinearCode repetition_code(std::size_t n) {
    if (n < 1) throw std::invalid_argument("repetition_code: n must be positive");
    LinearCode code;
    code.n = n;
    code.k = 1;
    BitMatrix h(n - 1, n);
    for (std::size_t i = 1; i + 1 <= n; ++i) {
        h.set(i, 1, true);
        h.set(i, i + 1, true);
    }
    code.parity_check = std::move(h);
    code.generator = BitMatrix::from_rows({BitWord::ones(n)}, n);
    // any nonzero kernel word must have all bits equal to bit 1, so the only
    // nonzero codeword is all-ones
    code.certified_distance = n;
    return code;
}

// The fixed [5, 2, 3] code used throughout the worked examples. Syndrome
// bits are (x1+x2+x3, x1+x2+x4, x2+x5).
inline LinearCode five_bit_demo_code() {
    LinearCode code;
    code.n = 5;
    code.k = 2;
    code.parity_check = BitMatrix{{1, 1, 1, 0, 0}, {1, 1, 0, 1, 0}, {0, 1, 0, 0, 1}};
    code.generator = BitMatrix{{1, 0, 1, 1, 0}, {0, 1, 1, 1, 1}};
    if (!certify_distance(code, 3)) throw std::logic_error("five_bit_demo_code: distance check failed");
    return code;
}

namespace detail {

inline std::size_t u64_set_rank(const std::vector<std::uint64_t>& vals) {
    std::uint64_t basis[64] = {};
    std::size_t rank = 0;
    for (std::uint64_t v : vals) {
        for (int b = 63; b >= 0 && v; --b) {
            if (!((v >> b) & 1u)) continue;
            if (!basis[b]) {
                basis[b] = v;
                ++rank;
                break;
            }
            v ^= basis[b];
        }
    }
    return rank;
}

// One greedy pass: try candidates in the given order, keeping a column when
// no subset of at most d-2 already-kept columns sums to it. Layered sums
// make the membership test O(1) per candidate.
class GreedyState {
public:
    GreedyState(std::size_t distance) : layers_(distance >= 2 ? distance - 1 : 1) {
        layers_[0].insert(0);
    }

    bool admissible(std::uint64_t col) const {
        for (const auto& layer : layers_)
            if (layer.count(col)) return false;
        return true;
    }

    void keep(std::uint64_t col) {
        for (std::size_t i = layers_.size(); i-- > 1;)
            for (std::uint64_t s : layers_[i - 1]) layers_[i].insert(s ^ col);
        cols_.push_back(col);
    }

    const std::vector<std::uint64_t>& cols() const { return cols_; }

private:
    std::vector<std::unordered_set<std::uint64_t>> layers_;
    std::vector<std::uint64_t> cols_;
};

}  // namespace detail

// Necessary condition on [n, k, d] binary linear codes (Griesmer bound):
// n >= sum over i < k of ceil(d / 2^i). Catches targets that cannot exist
// before any search effort is spent.
inline bool griesmer_admits(std::size_t n, std::size_t k, std::size_t d) {
    std::size_t need = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t q = std::size_t{1} << std::min<std::size_t>(i, 63);
        need += (d + q - 1) / q;
        if (need > n) return false;
    }
    return true;
}

// Greedy parity-check construction of an [n, n-r] code with minimum distance
// >= d: columns are added one at a time, each required to differ from every
// sum of at most d-2 already-chosen columns. The first pass scans candidate
// columns in ascending numeric order (row 1 is the most significant bit); if
// it stalls, seeded passes retry the scan in random candidate orders up to a
// fixed budget. The result is deterministic for a given (n, r, d, seed) and
// is certified before return.
inline LinearCode build_gv_code(std::size_t n, std::size_t r, std::size_t d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("build_gv_code: n must be positive");
    if (r < 1 || r > 63) throw std::invalid_argument("build_gv_code: redundancy must be in [1, 63]");
    if (d < 2) throw std::invalid_argument("build_gv_code: distance must be at least 2");
    if (r > n) throw std::invalid_argument("build_gv_code: redundancy exceeds length");

    // counting precondition: 2^r must not exceed the number of words within
    // distance d-1 of a codeword, otherwise the target is hopeless
    if ((BigInt(1) << static_cast<unsigned>(r)) > ball_size(n, d - 1))
        throw CodeConstructionError(CodeConstructionError::Reason::kInfeasible,
                                    "build_gv_code: redundancy too large for requested distance");
    if (!griesmer_admits(n, n - r, d))
        throw CodeConstructionError(CodeConstructionError::Reason::kInfeasible,
                                    "build_gv_code: no such code exists (Griesmer bound)");

    const std::uint64_t space = std::uint64_t{1} << r;
    constexpr std::size_t kBudget = 1000;
    // Full candidate permutations are only materialized when the column
    // space is small; otherwise random draws stand in for a shuffled scan.
    const bool shuffled_scan = r <= 20;
    std::vector<std::uint64_t> order;
    if (shuffled_scan) {
        order.resize(space - 1);
        for (std::uint64_t v = 1; v < space; ++v) order[v - 1] = v;
    }

    for (std::size_t attempt = 0; attempt < kBudget; ++attempt) {
        detail::GreedyState state(d);
        if (attempt == 0) {
            for (std::uint64_t v = 1; v < space && state.cols().size() < n; ++v)
                if (state.admissible(v)) state.keep(v);
        } else if (shuffled_scan) {
            std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * attempt);
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng() % i]);
            for (std::uint64_t v : order) {
                if (state.cols().size() == n) break;
                if (state.admissible(v)) state.keep(v);
            }
        } else {
            std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * attempt);
            std::uint64_t draws = 0;
            const std::uint64_t max_draws = 4096 * static_cast<std::uint64_t>(n);
            while (state.cols().size() < n && draws < max_draws) {
                std::uint64_t v = 1 + rng() % (space - 1);
                ++draws;
                if (state.admissible(v)) state.keep(v);
            }
        }
        if (state.cols().size() < n) continue;
        if (detail::u64_set_rank(state.cols()) < r) continue;

        LinearCode code;
        code.n = n;
        code.k = n - r;
        BitMatrix h(r, n);
        for (std::size_t c = 1; c <= n; ++c) {
            std::uint64_t v = state.cols()[c - 1];
            for (std::size_t row = 1; row <= r; ++row)
                if ((v >> (r - row)) & 1u) h.set(row, c, true);
        }
        code.parity_check = std::move(h);
        code.generator = BitMatrix::from_rows(kernel_basis(code.parity_check), n);
        if (!certify_distance(code, d)) continue;
        return code;
    }
    throw CodeConstructionError(CodeConstructionError::Reason::kBudgetExhausted,
                                "build_gv_code: retry budget exhausted");
}

// True when the weight-f balls around codewords tile the whole space, i.e.
// ball(n, f) == 2^(n-k) exactly.
inline bool is_perfect(const LinearCode& code, std::size_t f) {
    return ball_size(code.n, f) == (BigInt(1) << static_cast<unsigned>(code.syndrome_length()));
}

// Builds the code a given (message_len, max_flips) configuration calls for.
// The syndrome length always equals lbar_ceil(message_len, max_flips):
//   f == 0        -> nothing to correct, empty parity check
//   2f >= n       -> compression is impossible, identity parity check
//   otherwise     -> the requested construction
inline LinearCode code_for(const CodeSpec& spec) {
    const std::size_t n = spec.message_len;
    const std::size_t f = spec.max_flips;
    if (n < 1) throw std::invalid_argument("code_for: message_len must be positive");

    if (f == 0) {
        LinearCode code;
        code.n = n;
        code.k = n;
        code.parity_check = BitMatrix(0, n);
        code.generator = BitMatrix::identity(n);
        code.certified_distance = 1;
        return code;
    }

    const unsigned r = lbar_ceil(n, f);
    if (r == n) {
        LinearCode code;
        code.n = n;
        code.k = 0;
        code.parity_check = BitMatrix::identity(n);
        code.generator = BitMatrix(0, n);
        // the kernel is trivial, so every distance claim up to n+1 holds
        code.certified_distance = n + 1;
        return code;
    }

    switch (spec.construction) {
        case CodeConstruction::kRepetition: {
            if (r != n - 1 || 2 * f + 1 > n)
                throw std::invalid_argument("code_for: repetition code does not fit these parameters");
            return repetition_code(n);
        }
        case CodeConstruction::kFiveBitDemo: {
            if (n != 5 || f != 1)
                throw std::invalid_argument("code_for: demo code is fixed at message_len 5, max_flips 1");
            return five_bit_demo_code();
        }
        case CodeConstruction::kGreedy:
            return build_gv_code(n, r, 2 * f + 1, spec.seed);
    }
    throw std::invalid_argument("code_for: unknown construction");
}

}  // namespace privup
