#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace privup {

// Fixed-length vector over GF(2). Bit positions are 1-based throughout the
// library; packed byte output is MSB-first (bit 1 lands in the top bit of
// byte 0).
class BitWord {
public:
    BitWord() = default;

    explicit BitWord(std::size_t len) : len_(len), w_(words_for(len), 0) {}

    BitWord(std::initializer_list<int> bits) : BitWord(bits.size()) {
        std::size_t pos = 1;
        for (int b : bits) set(pos++, b != 0);
    }

    static BitWord zeros(std::size_t len) { return BitWord(len); }

    static BitWord ones(std::size_t len) {
        BitWord w(len);
        for (std::size_t i = 0; i < w.w_.size(); ++i) w.w_[i] = ~std::uint64_t{0};
        w.mask_tail();
        return w;
    }

    static BitWord unit(std::size_t len, std::size_t pos) {
        BitWord w(len);
        w.set(pos, true);
        return w;
    }

    // Interprets `value` big-endian: bit 1 of the word is the most
    // significant of the low `len` bits of `value`.
    static BitWord from_be_value(std::size_t len, std::uint64_t value) {
        if (len > 64) throw std::invalid_argument("bit word: value form limited to 64 bits");
        BitWord w(len);
        for (std::size_t i = 1; i <= len; ++i) w.set(i, (value >> (len - i)) & 1u);
        return w;
    }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t pos) const {
        check(pos);
        return (w_[(pos - 1) >> 6] >> ((pos - 1) & 63)) & 1u;
    }

    void set(std::size_t pos, bool v) {
        check(pos);
        std::uint64_t mask = std::uint64_t{1} << ((pos - 1) & 63);
        if (v)
            w_[(pos - 1) >> 6] |= mask;
        else
            w_[(pos - 1) >> 6] &= ~mask;
    }

    void flip(std::size_t pos) {
        check(pos);
        w_[(pos - 1) >> 6] ^= std::uint64_t{1} << ((pos - 1) & 63);
    }

    std::size_t weight() const {
        std::size_t n = 0;
        for (std::uint64_t v : w_) n += static_cast<std::size_t>(std::popcount(v));
        return n;
    }

    bool is_zero() const {
        for (std::uint64_t v : w_)
            if (v) return false;
        return true;
    }

    BitWord& operator^=(const BitWord& o) {
        if (o.len_ != len_) throw std::invalid_argument("bit word: length mismatch");
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }

    friend BitWord operator^(BitWord a, const BitWord& b) {
        a ^= b;
        return a;
    }

    friend bool operator==(const BitWord& a, const BitWord& b) {
        return a.len_ == b.len_ && a.w_ == b.w_;
    }

    friend bool operator!=(const BitWord& a, const BitWord& b) { return !(a == b); }

    // Total order used wherever a deterministic arrangement is needed.
    friend bool operator<(const BitWord& a, const BitWord& b) {
        if (a.len_ != b.len_) return a.len_ < b.len_;
        for (std::size_t i = 1; i <= a.len_; ++i) {
            bool x = a.get(i), y = b.get(i);
            if (x != y) return y;
        }
        return false;
    }

    // Parity of the AND of two equal-length words.
    friend bool dot(const BitWord& a, const BitWord& b) {
        if (a.len_ != b.len_) throw std::invalid_argument("bit word: length mismatch");
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
        return std::popcount(acc) & 1u;
    }

    friend std::size_t hamming_distance(const BitWord& a, const BitWord& b) {
        if (a.len_ != b.len_) throw std::invalid_argument("bit word: length mismatch");
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(a.w_[i] ^ b.w_[i]));
        return n;
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (std::size_t i = 1; i <= len_; ++i)
            if (get(i)) s.push_back(i);
        return s;
    }

    // Dense key for table indexing; only valid for short words.
    std::uint64_t as_key() const {
        if (len_ > 64) throw std::invalid_argument("bit word: key form limited to 64 bits");
        return w_.empty() ? 0 : w_[0];
    }

    // Inverse of from_be_value.
    std::uint64_t as_be_value() const {
        if (len_ > 64) throw std::invalid_argument("bit word: value form limited to 64 bits");
        std::uint64_t v = 0;
        for (std::size_t i = 1; i <= len_; ++i) v = (v << 1) | (get(i) ? 1u : 0u);
        return v;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(len_);
        for (std::size_t i = 1; i <= len_; ++i) s.push_back(get(i) ? '1' : '0');
        return s;
    }

    // MSB-first packing, zero-padded to a byte boundary.
    std::vector<std::uint8_t> packed() const {
        std::vector<std::uint8_t> out((len_ + 7) / 8, 0);
        for (std::size_t i = 1; i <= len_; ++i)
            if (get(i)) out[(i - 1) / 8] |= static_cast<std::uint8_t>(0x80u >> ((i - 1) % 8));
        return out;
    }

    static BitWord unpack(std::size_t len, std::span<const std::uint8_t> bytes) {
        if (bytes.size() != (len + 7) / 8) throw std::invalid_argument("bit word: packed size mismatch");
        BitWord w(len);
        for (std::size_t i = 1; i <= len; ++i)
            if (bytes[(i - 1) / 8] & (0x80u >> ((i - 1) % 8))) w.set(i, true);
        return w;
    }

private:
    static std::size_t words_for(std::size_t len) { return (len + 63) / 64; }

    void check(std::size_t pos) const {
        if (pos < 1 || pos > len_) throw std::out_of_range("bit word: position out of range");
    }

    void mask_tail() {
        if (len_ % 64) w_.back() &= (std::uint64_t{1} << (len_ % 64)) - 1;
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;

    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitWord(cols)) {}

    BitMatrix(std::initializer_list<std::initializer_list<int>> rows) {
        for (const auto& r : rows) {
            BitWord w(r);
            if (rows_.empty())
                cols_ = w.size();
            else if (w.size() != cols_)
                throw std::invalid_argument("bit matrix: ragged rows");
            rows_.push_back(std::move(w));
        }
    }

    static BitMatrix from_rows(std::vector<BitWord> rows, std::size_t cols) {
        BitMatrix m;
        m.cols_ = cols;
        for (auto& r : rows) {
            if (r.size() != cols) throw std::invalid_argument("bit matrix: ragged rows");
            m.rows_.push_back(std::move(r));
        }
        return m;
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 1; i <= n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool at(std::size_t r, std::size_t c) const { return row(r).get(c); }

    void set(std::size_t r, std::size_t c, bool v) {
        check_row(r);
        rows_[r - 1].set(c, v);
    }

    const BitWord& row(std::size_t r) const {
        check_row(r);
        return rows_[r - 1];
    }

    BitWord column(std::size_t c) const {
        BitWord w(rows());
        for (std::size_t r = 1; r <= rows(); ++r) w.set(r, at(r, c));
        return w;
    }

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
        return a.cols_ == b.cols_ && a.rows_ == b.rows_;
    }

    friend bool operator!=(const BitMatrix& a, const BitMatrix& b) { return !(a == b); }

private:
    void check_row(std::size_t r) const {
        if (r < 1 || r > rows_.size()) throw std::out_of_range("bit matrix: row out of range");
    }

    std::size_t cols_ = 0;
    std::vector<BitWord> rows_;
};

// m * w over GF(2), with w a column vector of length m.cols().
inline BitWord mat_vec_mul(const BitMatrix& m, const BitWord& w) {
    if (w.size() != m.cols()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitWord out(m.rows());
    for (std::size_t r = 1; r <= m.rows(); ++r) out.set(r, dot(m.row(r), w));
    return out;
}

// Enumerates all length-n words of weight <= max_weight in a fixed order:
// ascending weight, and within a weight class ascending support
// lexicographically (so {1,2} precedes {1,3} precedes {2,3}). The visitor
// returns false to stop early.
inline void for_each_word_of_weight_at_most(std::size_t n, std::size_t max_weight,
                                            const std::function<bool(const BitWord&)>& visit) {
    if (!visit(BitWord(n))) return;
    std::size_t cap = max_weight < n ? max_weight : n;
    std::vector<std::size_t> pos;
    for (std::size_t w = 1; w <= cap; ++w) {
        pos.resize(w);
        for (std::size_t i = 0; i < w; ++i) pos[i] = i + 1;
        for (;;) {
            BitWord word(n);
            for (std::size_t p : pos) word.set(p, true);
            if (!visit(word)) return;
            // advance to the next w-subset of {1..n}
            std::size_t i = w;
            while (i > 0 && pos[i - 1] == n - w + i) --i;
            if (i == 0) break;
            ++pos[i - 1];
            for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
}

inline std::vector<BitWord> words_of_weight_at_most(std::size_t n, std::size_t max_weight) {
    std::vector<BitWord> out;
    for_each_word_of_weight_at_most(n, max_weight, [&](const BitWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

namespace detail {

// Gauss-Jordan elimination over GF(2) on [m | t]; t may be empty. Returns
// pivot columns; rows end up in reduced echelon form.
inline std::vector<std::size_t> reduce(std::vector<BitWord>& rows, BitWord* t, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t c = 1; c <= cols && next_row < rows.size(); ++c) {
        std::size_t pivot = rows.size();
        for (std::size_t r = next_row; r < rows.size(); ++r)
            if (rows[r].get(c)) {
                pivot = r;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[next_row]);
        if (t) {
            bool tmp = t->get(pivot + 1);
            t->set(pivot + 1, t->get(next_row + 1));
            t->set(next_row + 1, tmp);
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next_row && rows[r].get(c)) {
                rows[r] ^= rows[next_row];
                if (t) t->set(r + 1, t->get(r + 1) ^ t->get(next_row + 1));
            }
        }
        pivots.push_back(c);
        ++next_row;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t rank(const BitMatrix& m) {
    std::vector<BitWord> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 1; r <= m.rows(); ++r) rows.push_back(m.row(r));
    return detail::reduce(rows, nullptr, m.cols()).size();
}

// Solves m * x = target over GF(2); returns one solution (free variables
// zero) or nullopt when the system is inconsistent.
inline std::optional<BitWord> find_preimage(const BitMatrix& m, const BitWord& target) {
    if (target.size() != m.rows()) throw std::invalid_argument("find_preimage: dimension mismatch");
    std::vector<BitWord> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 1; r <= m.rows(); ++r) rows.push_back(m.row(r));
    BitWord t = target;
    std::vector<std::size_t> pivots = detail::reduce(rows, &t, m.cols());
    for (std::size_t r = pivots.size(); r < rows.size(); ++r)
        if (t.get(r + 1)) return std::nullopt;
    BitWord x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) x.set(pivots[i], t.get(i + 1));
    return x;
}

// Basis of { x : m * x = 0 }.
inline std::vector<BitWord> kernel_basis(const BitMatrix& m) {
    std::vector<BitWord> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 1; r <= m.rows(); ++r) rows.push_back(m.row(r));
    std::vector<std::size_t> pivots = detail::reduce(rows, nullptr, m.cols());
    std::vector<bool> is_pivot(m.cols() + 1, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<BitWord> basis;
    for (std::size_t c = 1; c <= m.cols(); ++c) {
        if (is_pivot[c]) continue;
        BitWord v(m.cols());
        v.set(c, true);
        for (std::size_t i = 0; i < pivots.size(); ++i) v.set(pivots[i], rows[i].get(c));
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace privup
