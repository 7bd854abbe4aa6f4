#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "privup/bits.hpp"
#include "privup/bounds.hpp"
#include "privup/bytes.hpp"

namespace privup {

class UnsupportedParametersError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AuditInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters of one private-retrieval run: N replicated databases, K stored
// messages, each ell bits long.
struct PirParams {
    std::size_t databases = 0;  // N
    std::size_t messages = 0;   // K
    std::size_t ell = 0;        // bits per message

    void validate() const {
        if (databases < 2)
            throw std::invalid_argument("pir: at least two databases required (a single database cannot hide the index)");
        if (messages < 2) throw std::invalid_argument("pir: at least two messages required");
        if (messages > 255) throw std::invalid_argument("pir: message count exceeds wire limit of 255");
        if (ell > 0xffffffffull) throw std::invalid_argument("pir: message length exceeds wire limit");
    }

    friend bool operator==(const PirParams&, const PirParams&) = default;
};

struct Term {
    std::size_t message = 0;  // 1..K
    std::size_t symbol = 0;   // 1..ell
    std::uint8_t coeff = 1;   // GF(2)

    friend bool operator==(const Term&, const Term&) = default;
};

// One request line sent to a database: a GF(2) linear combination of stored
// bits. Coefficients are 1 except for placeholder terms of the mixed
// sub-plans, which stay in the query so its shape is independent of theta.
struct Combination {
    std::vector<Term> terms;

    void canonicalize() {
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
            return a.message != b.message ? a.message < b.message : a.symbol < b.symbol;
        });
    }

    void validate(const PirParams& params) const {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Term& t = terms[i];
            if (t.message < 1 || t.message > params.messages)
                throw std::out_of_range("combination: message index out of range");
            if (t.symbol < 1 || t.symbol > params.ell)
                throw std::out_of_range("combination: symbol index out of range");
            if (t.coeff > 1) throw std::invalid_argument("combination: coefficient must be 0 or 1");
            for (std::size_t j = 0; j < i; ++j)
                if (terms[j].message == t.message && terms[j].symbol == t.symbol)
                    throw std::invalid_argument("combination: duplicate (message, symbol) pair");
        }
    }

    friend bool operator==(const Combination&, const Combination&) = default;
};

// Canonical byte form of a database's query list; doubles as the wire body
// and as the distribution key of the privacy auditor.
inline Bytes combinations_to_bytes(const std::vector<Combination>& combos) {
    if (combos.size() > 0xffff) throw std::invalid_argument("query: too many combinations");
    Bytes out;
    put_u16_be(out, static_cast<std::uint16_t>(combos.size()));
    for (const Combination& c : combos) {
        if (c.terms.size() > 0xffff) throw std::invalid_argument("query: too many terms");
        put_u16_be(out, static_cast<std::uint16_t>(c.terms.size()));
        for (const Term& t : c.terms) {
            put_u8(out, static_cast<std::uint8_t>(t.message));
            put_u32_be(out, static_cast<std::uint32_t>(t.symbol));
            put_u8(out, t.coeff);
        }
    }
    return out;
}

inline std::vector<Combination> combinations_from_bytes(ByteReader& in) {
    std::vector<Combination> combos(in.u16_be());
    for (Combination& c : combos) {
        c.terms.resize(in.u16_be());
        for (Term& t : c.terms) {
            t.message = in.u8();
            t.symbol = in.u32_be();
            t.coeff = in.u8();
        }
    }
    return combos;
}

// The full randomness record of one plan: a uniform permutation per message
// (pattern slot -> stored symbol index) plus one coefficient vector per
// mixed-pair sub-plan. Replaying the record reproduces the plan bit for bit.
struct PlanRandomness {
    std::vector<std::vector<std::size_t>> perms;  // [k-1][slot-1] = symbol
    std::vector<BitWord> mixes;                   // one K-bit vector per extra slot

    friend bool operator==(const PlanRandomness&, const PlanRandomness&) = default;
};

struct AnswerRef {
    std::size_t db = 0;   // 1..N
    std::size_t pos = 0;  // 0-based position in that database's answer list

    friend bool operator==(const AnswerRef&, const AnswerRef&) = default;
};

// How one pattern slot's value is recovered: one source answer XOR any
// side-information answers.
struct SlotDecode {
    std::size_t slot = 0;
    AnswerRef source;
    std::vector<AnswerRef> side;
};

struct QueryPlan {
    PirParams params;
    std::size_t theta = 0;
    PlanRandomness randomness;
    std::vector<std::vector<Combination>> per_db;  // index db-1
    std::vector<SlotDecode> decode;                // one entry per slot 1..ell
};

struct AnswerSet {
    std::vector<std::vector<std::uint8_t>> per_db;  // GF(2) bits
};

inline std::size_t cost(const QueryPlan& plan) {
    std::size_t total = 0;
    for (const auto& q : plan.per_db) total += q.size();
    return total;
}

// Number of leftover slots served by mixed-pair sub-plans. Block sub-plans
// exist only for K = 2 (the general block construction is not pinned down
// beyond that case), so K >= 3 runs entirely on mixed pairs.
inline std::size_t extra_slot_count(const PirParams& params) {
    if (params.messages == 2) return params.ell % params.databases;
    return params.ell;
}

inline std::size_t block_count(const PirParams& params) {
    return params.messages == 2 ? params.ell / params.databases : 0;
}

inline PlanRandomness draw_randomness(const PirParams& params, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    PlanRandomness r;
    r.perms.resize(params.messages);
    for (auto& perm : r.perms) {
        perm.resize(params.ell);
        for (std::size_t i = 0; i < params.ell; ++i) perm[i] = i + 1;
        for (std::size_t i = params.ell; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(perm[i - 1], perm[j]);
        }
    }
    r.mixes.resize(extra_slot_count(params));
    for (BitWord& h : r.mixes) {
        h = BitWord(params.messages);
        for (std::size_t k = 1; k <= params.messages; ++k) h.set(k, rng() & 1u);
    }
    return r;
}

// A sub-plan: combinations in emission order tagged with their database,
// plus decode rules referring to emission indices. The assembler remaps the
// indices once the per-database lists are in canonical order.
struct PartialPlan {
    struct Item {
        std::size_t db = 0;
        Combination combo;
    };
    struct Recover {
        std::size_t slot = 0;
        std::size_t source = 0;
        std::vector<std::size_t> side;
    };
    std::vector<Item> items;
    std::vector<Recover> recovers;
};

namespace detail {

inline const std::vector<std::size_t>& perm_of(const PlanRandomness& r, std::size_t message) {
    return r.perms.at(message - 1);
}

inline std::size_t mapped_symbol(const PlanRandomness& r, std::size_t message, std::size_t slot) {
    return perm_of(r, message).at(slot - 1);
}

}  // namespace detail

// Block sub-plan for K = 2: database 1 serves one fresh symbol of each
// message; database n in 2..N serves (desired slot n of the block) + (the
// same undesired symbol database 1 served). Costs N+1 answers and recovers N
// desired slots.
inline PartialPlan plan_block(const PirParams& params, std::size_t theta,
                              const PlanRandomness& randomness, std::size_t block_index) {
    params.validate();
    if (params.messages != 2)
        throw UnsupportedParametersError("plan_block: block construction is only defined for two messages");
    if (theta < 1 || theta > params.messages) throw std::out_of_range("plan_block: theta out of range");
    const std::size_t n = params.databases;
    const std::size_t base = block_index * n;
    if (base + n > params.ell) throw std::out_of_range("plan_block: block index out of range");
    if (block_index + 1 > params.ell) throw std::out_of_range("plan_block: no slot left for side information");
    const std::size_t other = 3 - theta;

    PartialPlan p;
    p.items.push_back({1, Combination{{Term{theta, detail::mapped_symbol(randomness, theta, base + 1), 1}}}});
    p.items.push_back({1, Combination{{Term{other, detail::mapped_symbol(randomness, other, block_index + 1), 1}}}});
    p.recovers.push_back({base + 1, 0, {}});
    for (std::size_t db = 2; db <= n; ++db) {
        Combination c{{Term{theta, detail::mapped_symbol(randomness, theta, base + db), 1},
                       Term{other, detail::mapped_symbol(randomness, other, block_index + 1), 1}}};
        c.canonicalize();
        p.items.push_back({db, std::move(c)});
        p.recovers.push_back({base + db, p.items.size() - 1, {1}});
    }
    return p;
}

// Mixed-pair sub-plan serving one slot on any N >= 2: database 1 answers a
// random K-coefficient combination h over the designated symbols, database 2
// the same with the theta coefficient flipped; the XOR of the two answers is
// the desired bit. Zero-coefficient terms stay in the query so both
// databases always see a full K-term combination. Costs exactly 2.
inline PartialPlan plan_extra_bit(const PirParams& params, std::size_t theta,
                                  const PlanRandomness& randomness, std::size_t slot,
                                  const BitWord& mix) {
    params.validate();
    if (theta < 1 || theta > params.messages) throw std::out_of_range("plan_extra_bit: theta out of range");
    if (slot < 1 || slot > params.ell) throw std::out_of_range("plan_extra_bit: slot out of range");
    if (mix.size() != params.messages) throw std::invalid_argument("plan_extra_bit: coefficient vector length mismatch");

    Combination first, second;
    for (std::size_t k = 1; k <= params.messages; ++k) {
        std::size_t sym = detail::mapped_symbol(randomness, k, slot);
        std::uint8_t h = mix.get(k) ? 1 : 0;
        first.terms.push_back(Term{k, sym, h});
        second.terms.push_back(Term{k, sym, static_cast<std::uint8_t>(k == theta ? h ^ 1u : h)});
    }

    PartialPlan p;
    p.items.push_back({1, std::move(first)});
    p.items.push_back({2, std::move(second)});
    p.recovers.push_back({slot, 0, {1}});
    return p;
}

namespace detail {

inline bool combo_less(const Combination& a, const Combination& b) {
    auto key = [](const Term& t) { return std::tuple(t.message, t.symbol, t.coeff); };
    return std::lexicographical_compare(a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
                                        [&](const Term& x, const Term& y) { return key(x) < key(y); });
}

inline void validate_randomness(const PirParams& params, const PlanRandomness& r) {
    if (r.perms.size() != params.messages) throw std::invalid_argument("plan: permutation count mismatch");
    for (const auto& perm : r.perms) {
        if (perm.size() != params.ell) throw std::invalid_argument("plan: permutation length mismatch");
        std::vector<bool> seen(params.ell + 1, false);
        for (std::size_t s : perm) {
            if (s < 1 || s > params.ell || seen[s]) throw std::invalid_argument("plan: not a permutation");
            seen[s] = true;
        }
    }
    if (r.mixes.size() != extra_slot_count(params))
        throw std::invalid_argument("plan: coefficient vector count mismatch");
    for (const BitWord& h : r.mixes)
        if (h.size() != params.messages) throw std::invalid_argument("plan: coefficient vector length mismatch");
}

}  // namespace detail

// Assembles the full plan from replayable randomness. For K = 2 the pattern
// slots split into ell/N blocks plus leftovers; each sub-plan's combinations
// are appended in canonical order so nothing about the final arrangement
// depends on theta.
inline QueryPlan plan_with_randomness(const PirParams& params, std::size_t theta,
                                      const PlanRandomness& randomness) {
    params.validate();
    if (theta < 1 || theta > params.messages) throw std::out_of_range("plan: theta out of range");
    detail::validate_randomness(params, randomness);

    QueryPlan plan;
    plan.params = params;
    plan.theta = theta;
    plan.randomness = randomness;
    plan.per_db.resize(params.databases);

    const std::size_t blocks = block_count(params);
    const std::size_t extras = extra_slot_count(params);

    auto absorb = [&](const PartialPlan& part) {
        // canonical order within this sub-plan chunk: stable per database
        std::vector<std::size_t> order(part.items.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ia = part.items[a];
            const auto& ib = part.items[b];
            if (ia.db != ib.db) return ia.db < ib.db;
            return detail::combo_less(ia.combo, ib.combo);
        });
        std::vector<AnswerRef> placed(part.items.size());
        for (std::size_t i : order) {
            const auto& item = part.items[i];
            item.combo.validate(params);
            plan.per_db[item.db - 1].push_back(item.combo);
            placed[i] = AnswerRef{item.db, plan.per_db[item.db - 1].size() - 1};
        }
        for (const auto& rec : part.recovers) {
            SlotDecode d;
            d.slot = rec.slot;
            d.source = placed[rec.source];
            for (std::size_t s : rec.side) d.side.push_back(placed[s]);
            plan.decode.push_back(std::move(d));
        }
    };

    for (std::size_t b = 0; b < blocks; ++b) absorb(plan_block(params, theta, randomness, b));
    for (std::size_t j = 0; j < extras; ++j)
        absorb(plan_extra_bit(params, theta, randomness, blocks * params.databases + j + 1, randomness.mixes[j]));

    std::sort(plan.decode.begin(), plan.decode.end(),
              [](const SlotDecode& a, const SlotDecode& b) { return a.slot < b.slot; });
    for (std::size_t s = 0; s < plan.decode.size(); ++s)
        if (plan.decode[s].slot != s + 1) throw std::logic_error("plan: slot coverage broken");
    if (plan.decode.size() != params.ell) throw std::logic_error("plan: slot coverage broken");
    return plan;
}

inline QueryPlan plan_query(const PirParams& params, std::size_t theta, std::uint64_t seed) {
    return plan_with_randomness(params, theta, draw_randomness(params, seed));
}

// One database's answers: each combination evaluated over its stored bits.
inline std::vector<std::uint8_t> answer(const std::vector<Combination>& combos,
                                        const std::vector<BitWord>& library) {
    std::vector<std::uint8_t> out;
    out.reserve(combos.size());
    for (const Combination& c : combos) {
        std::uint8_t bit = 0;
        for (const Term& t : c.terms) {
            if (t.message < 1 || t.message > library.size())
                throw std::out_of_range("answer: message index out of range");
            const BitWord& w = library[t.message - 1];
            if (t.symbol < 1 || t.symbol > w.size()) throw std::out_of_range("answer: symbol index out of range");
            if (t.coeff) bit ^= w.get(t.symbol) ? 1u : 0u;
        }
        out.push_back(bit);
    }
    return out;
}

inline AnswerSet answer_all(const QueryPlan& plan, const std::vector<BitWord>& library) {
    AnswerSet a;
    for (const auto& q : plan.per_db) a.per_db.push_back(answer(q, library));
    return a;
}

// Follows the decode rules and undoes the symbol permutation, returning the
// desired message in stored order.
inline BitWord reconstruct(const QueryPlan& plan, const AnswerSet& answers) {
    if (answers.per_db.size() != plan.per_db.size()) throw std::invalid_argument("reconstruct: shape mismatch");
    for (std::size_t i = 0; i < plan.per_db.size(); ++i)
        if (answers.per_db[i].size() != plan.per_db[i].size())
            throw std::invalid_argument("reconstruct: shape mismatch");

    auto bit_at = [&](const AnswerRef& ref) -> std::uint8_t {
        if (ref.db < 1 || ref.db > answers.per_db.size() || ref.pos >= answers.per_db[ref.db - 1].size())
            throw std::out_of_range("reconstruct: answer reference out of range");
        return answers.per_db[ref.db - 1][ref.pos];
    };

    BitWord out(plan.params.ell);
    for (const SlotDecode& d : plan.decode) {
        std::uint8_t v = bit_at(d.source);
        for (const AnswerRef& s : d.side) v ^= bit_at(s);
        out.set(detail::mapped_symbol(plan.randomness, plan.theta, d.slot), v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Auditing and verification

using Planner = std::function<QueryPlan(const PirParams&, std::size_t theta, const PlanRandomness&)>;

inline Planner default_planner() {
    return [](const PirParams& p, std::size_t theta, const PlanRandomness& r) {
        return plan_with_randomness(p, theta, r);
    };
}

enum class AuditMode { kExhaustive, kMonteCarlo };

struct AuditOptions {
    AuditMode mode = AuditMode::kExhaustive;
    std::size_t trials = 1000;          // monte carlo sample count per theta
    std::size_t budget = 1u << 21;      // exhaustive state-space cap
};

struct AuditReport {
    AuditMode mode = AuditMode::kExhaustive;
    std::size_t configs_per_theta = 0;
    std::vector<Rational> per_db_distance;  // max TV over theta pairs, per database
    Rational max_distance = 0;

    bool passed() const { return max_distance == 0; }
};

namespace detail {

inline BigInt factorial(std::size_t n) {
    BigInt r = 1;
    for (std::size_t i = 2; i <= n; ++i) r *= i;
    return r;
}

// Visits every randomness record: all permutation tuples, then every
// coefficient-vector tuple for each.
inline void for_each_randomness(const PirParams& params, const std::function<void(const PlanRandomness&)>& visit) {
    const std::size_t extras = extra_slot_count(params);
    PlanRandomness r;
    r.perms.assign(params.messages, {});
    for (auto& perm : r.perms) {
        perm.resize(params.ell);
        for (std::size_t i = 0; i < params.ell; ++i) perm[i] = i + 1;
    }
    r.mixes.assign(extras, BitWord(params.messages));

    std::function<void(std::size_t)> perm_rec = [&](std::size_t k) {
        if (k == params.messages) {
            std::function<void(std::size_t)> mix_rec = [&](std::size_t j) {
                if (j == extras) {
                    visit(r);
                    return;
                }
                std::uint64_t count = std::uint64_t{1} << params.messages;
                for (std::uint64_t v = 0; v < count; ++v) {
                    r.mixes[j] = BitWord::from_be_value(params.messages, v);
                    mix_rec(j + 1);
                }
            };
            mix_rec(0);
            return;
        }
        std::vector<std::size_t>& perm = r.perms[k];
        std::sort(perm.begin(), perm.end());
        do {
            perm_rec(k + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    perm_rec(0);
}

inline BigInt randomness_space(const PirParams& params) {
    BigInt total = boost::multiprecision::pow(factorial(params.ell), static_cast<unsigned>(params.messages));
    total *= BigInt(1) << static_cast<unsigned>(params.messages * extra_slot_count(params));
    return total;
}

inline Rational tv_distance(const std::map<Bytes, std::size_t>& a, const std::map<Bytes, std::size_t>& b,
                            std::size_t denom) {
    BigInt diff = 0;
    auto it_a = a.begin();
    auto it_b = b.begin();
    while (it_a != a.end() || it_b != b.end()) {
        if (it_b == b.end() || (it_a != a.end() && it_a->first < it_b->first)) {
            diff += it_a->second;
            ++it_a;
        } else if (it_a == a.end() || it_b->first < it_a->first) {
            diff += it_b->second;
            ++it_b;
        } else {
            diff += it_a->second > it_b->second ? it_a->second - it_b->second : it_b->second - it_a->second;
            ++it_a;
            ++it_b;
        }
    }
    return Rational(diff, BigInt(2) * denom);
}

}  // namespace detail

// Measures, per database, how distinguishable the query distributions are
// across desired-message indices: exact total-variation distance from full
// enumeration of the randomness, or an empirical estimate from seeded
// samples. A scheme is private exactly when the exhaustive distance is 0.
inline AuditReport audit_privacy(const PirParams& params, const Planner& planner, const AuditOptions& opts) {
    params.validate();
    AuditReport report;
    report.mode = opts.mode;

    // distributions[db-1][theta-1]: canonical query bytes -> count
    std::vector<std::vector<std::map<Bytes, std::size_t>>> dist(
        params.databases, std::vector<std::map<Bytes, std::size_t>>(params.messages));

    auto tally = [&](std::size_t theta, const PlanRandomness& r) {
        QueryPlan plan = planner(params, theta, r);
        for (std::size_t db = 1; db <= params.databases; ++db)
            dist[db - 1][theta - 1][combinations_to_bytes(plan.per_db[db - 1])]++;
    };

    if (opts.mode == AuditMode::kExhaustive) {
        BigInt space = detail::randomness_space(params);
        if (space > opts.budget)
            throw AuditInfeasibleError("audit: randomness space of " + space.str() +
                                       " configurations exceeds the exhaustive budget");
        report.configs_per_theta = static_cast<std::size_t>(space);
        for (std::size_t theta = 1; theta <= params.messages; ++theta)
            detail::for_each_randomness(params, [&](const PlanRandomness& r) { tally(theta, r); });
    } else {
        report.configs_per_theta = opts.trials;
        for (std::size_t theta = 1; theta <= params.messages; ++theta)
            for (std::size_t t = 0; t < opts.trials; ++t) tally(theta, draw_randomness(params, t));
    }

    for (std::size_t db = 0; db < params.databases; ++db) {
        Rational worst = 0;
        for (std::size_t a = 0; a < params.messages; ++a)
            for (std::size_t b = a + 1; b < params.messages; ++b)
                worst = std::max(worst, detail::tv_distance(dist[db][a], dist[db][b], report.configs_per_theta));
        report.per_db_distance.push_back(worst);
        report.max_distance = std::max(report.max_distance, worst);
    }
    return report;
}

// Joint audit over (query, answers) per database with the stored library
// enumerated as well; only feasible for tiny parameters, but it checks the
// full observable of each database rather than the query alone.
inline AuditReport audit_privacy_joint(const PirParams& params, const Planner& planner, std::size_t budget) {
    params.validate();
    const std::size_t lib_bits = params.messages * params.ell;
    if (lib_bits > 20) throw AuditInfeasibleError("joint audit: library space too large");
    BigInt space = detail::randomness_space(params) * (BigInt(1) << static_cast<unsigned>(lib_bits));
    if (space > budget)
        throw AuditInfeasibleError("joint audit: state space of " + space.str() +
                                   " configurations exceeds the budget");

    AuditReport report;
    report.mode = AuditMode::kExhaustive;
    report.configs_per_theta = static_cast<std::size_t>(space);

    std::vector<std::vector<std::map<Bytes, std::size_t>>> dist(
        params.databases, std::vector<std::map<Bytes, std::size_t>>(params.messages));

    const std::uint64_t lib_count = std::uint64_t{1} << lib_bits;
    for (std::uint64_t lib_id = 0; lib_id < lib_count; ++lib_id) {
        std::vector<BitWord> library;
        for (std::size_t k = 0; k < params.messages; ++k)
            library.push_back(BitWord::from_be_value(params.ell, (lib_id >> (k * params.ell)) &
                                                                     ((std::uint64_t{1} << params.ell) - 1)));
        for (std::size_t theta = 1; theta <= params.messages; ++theta) {
            detail::for_each_randomness(params, [&](const PlanRandomness& r) {
                QueryPlan plan = planner(params, theta, r);
                for (std::size_t db = 1; db <= params.databases; ++db) {
                    Bytes key = combinations_to_bytes(plan.per_db[db - 1]);
                    put_u8(key, 0xfe);
                    for (std::uint8_t bit : answer(plan.per_db[db - 1], library)) put_u8(key, bit);
                    put_u8(key, 0xfd);
                    for (const BitWord& w : library)
                        for (std::uint8_t byte : w.packed()) put_u8(key, byte);
                    dist[db - 1][theta - 1][key]++;
                }
            });
        }
    }

    for (std::size_t db = 0; db < params.databases; ++db) {
        Rational worst = 0;
        for (std::size_t a = 0; a < params.messages; ++a)
            for (std::size_t b = a + 1; b < params.messages; ++b)
                worst = std::max(worst, detail::tv_distance(dist[db][a], dist[db][b], report.configs_per_theta));
        report.per_db_distance.push_back(worst);
        report.max_distance = std::max(report.max_distance, worst);
    }
    return report;
}

struct VerifyOptions {
    std::size_t randomness_trials = 16;   // seeds 0..trials-1
    std::size_t library_budget = 4096;    // exhaustive when 2^(K*ell) fits
    std::size_t library_samples = 32;     // otherwise this many seeded draws
};

struct VerifyReport {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0 && cases > 0; }
};

// End-to-end correctness sweep: for every theta, seeded randomness, and
// library (exhaustive when small), planning + answering + reconstruction must
// return the desired message exactly.
inline VerifyReport verify_scheme(const PirParams& params, const Planner& planner, const VerifyOptions& opts) {
    params.validate();
    VerifyReport report;

    std::vector<std::vector<BitWord>> libraries;
    const std::size_t lib_bits = params.messages * params.ell;
    if (lib_bits <= 12 && (std::size_t{1} << lib_bits) <= opts.library_budget) {
        for (std::uint64_t id = 0; id < (std::uint64_t{1} << lib_bits); ++id) {
            std::vector<BitWord> lib;
            for (std::size_t k = 0; k < params.messages; ++k)
                lib.push_back(BitWord::from_be_value(params.ell, (id >> (k * params.ell)) &
                                                                     ((std::uint64_t{1} << params.ell) - 1)));
            libraries.push_back(std::move(lib));
        }
    } else {
        std::mt19937_64 rng(0x5eedu);
        for (std::size_t i = 0; i < opts.library_samples; ++i) {
            std::vector<BitWord> lib;
            for (std::size_t k = 0; k < params.messages; ++k) {
                BitWord w(params.ell);
                for (std::size_t b = 1; b <= params.ell; ++b) w.set(b, rng() & 1u);
                lib.push_back(std::move(w));
            }
            libraries.push_back(std::move(lib));
        }
    }

    for (std::size_t theta = 1; theta <= params.messages; ++theta) {
        for (std::size_t seed = 0; seed < opts.randomness_trials; ++seed) {
            PlanRandomness r = draw_randomness(params, seed);
            QueryPlan plan = planner(params, theta, r);
            for (const auto& lib : libraries) {
                ++report.cases;
                BitWord got;
                bool threw = false;
                try {
                    got = reconstruct(plan, answer_all(plan, lib));
                } catch (const std::exception& e) {
                    threw = true;
                    if (report.first_failure.empty()) report.first_failure = e.what();
                }
                if (threw || got != lib[theta - 1]) {
                    ++report.failures;
                    if (report.first_failure.empty())
                        report.first_failure = "theta " + std::to_string(theta) + " seed " +
                                               std::to_string(seed) + ": wrong reconstruction";
                }
            }
        }
    }
    return report;
}

}  // namespace privup
