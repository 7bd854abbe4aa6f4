#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "privup/bounds.hpp"
#include "privup/pir.hpp"
#include "privup/protocol.hpp"
#include "privup/syndrome.hpp"
#include "privup/transport.hpp"
#include "privup/wire.hpp"

namespace privup {

class ConfigMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// One thread per database; first failure is rethrown after all join.
inline void for_each_db(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n);
    threads.reserve(n);
    for (std::size_t db = 1; db <= n; ++db)
        threads.emplace_back([&, db] {
            try {
                fn(db);
            } catch (...) {
                errors[db - 1] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline void check_status(wire::Status status, std::size_t db) {
    if (status == wire::Status::kOk) return;
    std::string where = "database " + std::to_string(db);
    if (status == wire::Status::kConfigMismatch)
        throw ConfigMismatchError(where + " runs a different configuration");
    throw TransportError(where + " returned error status " + std::to_string(static_cast<int>(status)));
}

}  // namespace detail

// Retrieves the theta-th prepared record (ell bits) privately: HELLO round
// to pin the configuration, then the planned queries, all databases in
// flight concurrently. Returns the record and the exact download cost.
inline std::pair<BitWord, std::size_t> retrieve_record(const SystemConfig& config, std::size_t theta,
                                                       std::size_t ell, Transport& transport,
                                                       std::uint64_t plan_seed, const Digest& digest) {
    if (transport.database_count() != config.databases)
        throw std::invalid_argument("update: transport endpoint count does not match config");

    PirParams params{config.databases, config.messages, ell};
    QueryPlan plan = plan_query(params, theta, plan_seed);

    Bytes hello = wire::encode_hello_request(digest);
    detail::for_each_db(config.databases, [&](std::size_t db) {
        wire::Response resp = wire::parse_response(transport.roundtrip(db, hello), wire::Opcode::kHello);
        detail::check_status(resp.status, db);
        if (resp.digest != digest)
            throw ConfigMismatchError("database " + std::to_string(db) + " advertises a different config digest");
    });

    AnswerSet answers;
    answers.per_db.resize(config.databases);
    detail::for_each_db(config.databases, [&](std::size_t db) {
        Bytes request = wire::encode_query_request(plan.per_db[db - 1]);
        wire::Response resp = wire::parse_response(transport.roundtrip(db, request), wire::Opcode::kQuery);
        detail::check_status(resp.status, db);
        if (resp.bits.size() != plan.per_db[db - 1].size())
            throw TransportError("database " + std::to_string(db) + " returned a wrong answer count");
        answers.per_db[db - 1] = std::move(resp.bits);
    });

    return {reconstruct(plan, answers), cost(plan)};
}

// Full private update in the configured mode. The plan seed defaults to
// config.seed; callers doing repeated updates should pass a fresh seed per
// run, since the privacy guarantee needs fresh randomness every time.
inline UpdateReport run_update(const SystemConfig& config, const UpdateInstance& instance,
                               Transport& transport, std::uint64_t plan_seed,
                               const LinearCode* code_override = nullptr) {
    config.validate();
    if (instance.theta < 1 || instance.theta > config.messages)
        throw std::out_of_range("update: theta out of range");
    if (instance.outdated.size() != config.message_len)
        throw std::invalid_argument("update: outdated copy has the wrong length");
    if (config.mode == UpdateMode::kBoundedFlips && instance.max_flips > config.max_flips)
        throw std::invalid_argument("update: instance flip bound exceeds the system bound");

    UpdateReport report;
    report.bounds = compute_bounds(static_cast<unsigned>(config.databases), static_cast<unsigned>(config.messages),
                                   static_cast<unsigned>(config.message_len), static_cast<unsigned>(config.max_flips));

    LinearCode code = code_override ? *code_override : effective_code(config);
    if (code_override) validate_code_for(config, code);
    const std::size_t ell = code.syndrome_length();
    if (ell == 0) {
        // nothing can have changed; no download needed
        report.updated = instance.outdated;
        report.bits_downloaded = 0;
        report.met_upper_bound = true;
        return report;
    }

    auto [record, bits] =
        retrieve_record(config, instance.theta, ell, transport, plan_seed, config_digest(config, code));
    report.bits_downloaded = bits;

    switch (config.mode) {
        case UpdateMode::kBoundedFlips: {
            DecodeResult dec = update_decode(code, instance.outdated, Syndrome{record, code.id()}, config.max_flips);
            report.updated = dec.updated;
            report.flip_positions = dec.flip_positions;
            break;
        }
        case UpdateMode::kExactOneFlip: {
            // XOR of retrieved and locally computed parities is the signature
            // of the flipped position: the value of L-j read MSB-first. A
            // value >= L corresponds to no position; signature 0 means bit L
            // flipped (an actually-clean copy is outside this mode's model).
            BitWord local = mat_vec_mul(code.parity_check, instance.outdated);
            std::uint64_t v = (record ^ local).as_be_value();
            if (v >= config.message_len)
                throw DecodeError("update: signature names no position; copy is not one flip away");
            std::size_t pos = config.message_len - static_cast<std::size_t>(v);
            report.updated = instance.outdated;
            report.updated.flip(pos);
            report.flip_positions = {pos};
            break;
        }
        case UpdateMode::kNaive: {
            report.updated = record;
            report.flip_positions = (record ^ instance.outdated).support();
            break;
        }
    }

    report.met_upper_bound = report.bits_downloaded <= report.bounds.upper;
    return report;
}

inline UpdateReport run_update(const SystemConfig& config, const UpdateInstance& instance, Transport& transport) {
    return run_update(config, instance, transport, config.seed);
}

inline UpdateReport client_update(const SystemConfig& config, const UpdateInstance& instance, Transport& transport) {
    if (config.mode != UpdateMode::kBoundedFlips)
        throw std::invalid_argument("client_update: config mode must be bounded");
    return run_update(config, instance, transport);
}

inline UpdateReport exact_one_flip_update(const SystemConfig& config, const UpdateInstance& instance,
                                          Transport& transport) {
    if (config.mode != UpdateMode::kExactOneFlip)
        throw std::invalid_argument("exact_one_flip_update: config mode must be one-flip");
    return run_update(config, instance, transport);
}

inline UpdateReport naive_update(const SystemConfig& config, const UpdateInstance& instance, Transport& transport) {
    if (config.mode != UpdateMode::kNaive)
        throw std::invalid_argument("naive_update: config mode must be naive");
    return run_update(config, instance, transport);
}

}  // namespace privup
