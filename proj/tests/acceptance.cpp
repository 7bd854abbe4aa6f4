// Acceptance gate for the full artifact: ten end-to-end checks, one line of
// output each. Checks 5 and 10 drive the installed CLI binary, whose path
// must be passed as argv[1]; check 10 spawns two real server processes and
// compares wire transcripts byte for byte.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "privup/privup.hpp"

namespace {

using namespace privup;

std::string g_cli;
std::filesystem::path g_tmp;

// ---------------------------------------------------------------------------
// process helpers

std::string run_command(const std::string& cmd, int& exit_code) {
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return "";
    }
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

pid_t spawn(const std::vector<std::string>& argv, const std::string& log_path) {
    pid_t pid = fork();
    if (pid != 0) return pid;
    int log = open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (log >= 0) {
        dup2(log, 1);
        dup2(log, 2);
        close(log);
    }
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execv(args[0], args.data());
    _exit(127);
}

std::uint16_t wait_for_port(const std::filesystem::path& port_file) {
    for (int i = 0; i < 800; ++i) {
        if (std::filesystem::exists(port_file)) {
            Bytes b = read_file(port_file.string());
            if (!b.empty()) return static_cast<std::uint16_t>(std::stoi(std::string(b.begin(), b.end())));
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    throw std::runtime_error("server did not report a port: " + port_file.string());
}

std::map<std::string, std::string> parse_report(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto space = line.find(' ');
        if (space != std::string::npos) kv[line.substr(0, space)] = line.substr(space + 1);
    }
    return kv;
}

// ---------------------------------------------------------------------------
// criterion 1: two databases, two 3-bit messages, one flip allowed. Every
// library, every admissible stale copy, both targets, every plan randomness:
// the update must land on the fresh message at a download cost of 3 bits.

bool check_full_enumeration_3bit(std::string& detail) {
    LinearCode code = code_for(CodeSpec{3, 1, CodeConstruction::kRepetition, 0});
    const std::size_t ell = code.syndrome_length();
    if (ell != 2) {
        detail = "syndrome length " + std::to_string(ell) + ", expected 2";
        return false;
    }
    PirParams params{2, 2, ell};
    std::vector<PlanRandomness> randomness;
    detail::for_each_randomness(params, [&](const PlanRandomness& r) { randomness.push_back(r); });

    std::size_t runs = 0;
    for (std::uint64_t w1 = 0; w1 < 8; ++w1) {
        for (std::uint64_t w2 = 0; w2 < 8; ++w2) {
            std::vector<BitWord> lib{BitWord::from_be_value(3, w1), BitWord::from_be_value(3, w2)};
            std::vector<BitWord> prepared{mat_vec_mul(code.parity_check, lib[0]),
                                          mat_vec_mul(code.parity_check, lib[1])};
            for (std::size_t theta = 1; theta <= 2; ++theta) {
                const BitWord& fresh = lib[theta - 1];
                for (BigInt rank = 0; rank < 4; ++rank) {
                    BitWord stale = fresh ^ nth_flip_pattern(3, 1, rank);
                    for (const PlanRandomness& r : randomness) {
                        QueryPlan plan = plan_with_randomness(params, theta, r);
                        if (cost(plan) != 3) {
                            detail = "download cost " + std::to_string(cost(plan)) + " != 3";
                            return false;
                        }
                        BitWord record = reconstruct(plan, answer_all(plan, prepared));
                        DecodeResult dec = update_decode(code, stale, Syndrome{record, code.id()}, 1);
                        if (dec.updated != fresh) {
                            detail = "wrong update at library (" + std::to_string(w1) + "," + std::to_string(w2) + ")";
                            return false;
                        }
                        ++runs;
                    }
                }
            }
        }
    }
    detail = std::to_string(runs) + " runs, all correct at cost 3";
    return runs == 2048;
}

// ---------------------------------------------------------------------------
// criterion 2: two 5-bit messages under the fixed [5,2,3] code. Exhaustive
// libraries and stale copies: always correct, always 5 bits down, and the
// bounds report must sandwich that cost as 4 <= 5.

bool check_full_enumeration_5bit(std::string& detail) {
    LinearCode code = code_for(CodeSpec{5, 1, CodeConstruction::kFiveBitDemo, 0});
    PirParams params{2, 2, code.syndrome_length()};
    BoundsReport bounds = compute_bounds(2, 2, 5, 1);
    if (bounds.lower != 4 || bounds.upper != 5) {
        detail = "bounds " + std::to_string(bounds.lower) + "/" + std::to_string(bounds.upper) + ", expected 4/5";
        return false;
    }

    std::size_t runs = 0;
    std::uint64_t seed = 0;
    for (std::uint64_t w1 = 0; w1 < 32; ++w1) {
        for (std::uint64_t w2 = 0; w2 < 32; ++w2) {
            std::vector<BitWord> lib{BitWord::from_be_value(5, w1), BitWord::from_be_value(5, w2)};
            std::vector<BitWord> prepared{mat_vec_mul(code.parity_check, lib[0]),
                                          mat_vec_mul(code.parity_check, lib[1])};
            for (std::size_t theta = 1; theta <= 2; ++theta) {
                const BitWord& fresh = lib[theta - 1];
                for (BigInt rank = 0; rank < 6; ++rank) {
                    BitWord stale = fresh ^ nth_flip_pattern(5, 1, rank);
                    QueryPlan plan = plan_query(params, theta, seed++);
                    if (cost(plan) != 5) {
                        detail = "download cost " + std::to_string(cost(plan)) + " != 5";
                        return false;
                    }
                    BitWord record = reconstruct(plan, answer_all(plan, prepared));
                    DecodeResult dec = update_decode(code, stale, Syndrome{record, code.id()}, 1);
                    if (dec.updated != fresh) {
                        detail = "wrong update at library (" + std::to_string(w1) + "," + std::to_string(w2) + ")";
                        return false;
                    }
                    ++runs;
                }
            }
        }
    }
    detail = std::to_string(runs) + " runs, all correct at cost 5; bounds 4/5";
    return runs == 12288;
}

// ---------------------------------------------------------------------------
// criterion 3: bound ordering across the parameter sweep: lower <= upper <=
// naive, the gap never exceeds 2, and the bounds meet whenever the flip ball
// is a power of two.

bool check_bound_sandwich(std::string& detail) {
    std::size_t checks = 0;
    for (unsigned n : {2, 3, 4}) {
        for (unsigned k : {2, 3}) {
            for (unsigned l = 1; l <= 16; ++l) {
                for (unsigned f = 0; f <= l; ++f) {
                    BoundsReport b = compute_bounds(n, k, l, f);
                    bool ordered = b.lower <= b.upper && b.upper <= b.naive;
                    bool gap_ok = b.upper - b.lower <= 2 && b.gap == b.upper - b.lower;
                    bool tight_ok = b.tight == (b.lower == b.upper);
                    bool power = is_power_of_two(ball_size(l, f));
                    if (!ordered || !gap_ok || !tight_ok || (power && !b.tight)) {
                        detail = "violated at N=" + std::to_string(n) + " K=" + std::to_string(k) +
                                 " L=" + std::to_string(l) + " f=" + std::to_string(f);
                        return false;
                    }
                    ++checks;
                }
            }
        }
    }
    detail = std::to_string(checks) + " parameter points hold";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 4: the compressed record stops saving anything exactly at
// f >= L/2: lbar_ceil = L iff 2f >= L.

bool check_compression_threshold(std::string& detail) {
    std::size_t checks = 0;
    for (unsigned l = 1; l <= 20; ++l) {
        for (unsigned f = 0; f <= l; ++f) {
            bool full = lbar_ceil(l, f) == l;
            if (full != (2 * f >= l)) {
                detail = "mismatch at L=" + std::to_string(l) + " f=" + std::to_string(f);
                return false;
            }
            ++checks;
        }
    }
    detail = std::to_string(checks) + " (L, f) points hold";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 5: the CLI cost curve for N=2, K=10, L=32: upper=12 and lower=11
// at f=1, upper=naive=64 from f=16 on, upper nondecreasing throughout.

bool check_cli_curve(std::string& detail) {
    int exit_code = 0;
    std::string out = run_command(g_cli + " curve --n 2 --k 10 --l 32", exit_code);
    if (exit_code != 0) {
        detail = "curve exited with " + std::to_string(exit_code);
        return false;
    }
    std::istringstream in(out);
    std::string line;
    if (!std::getline(in, line) || line != "f,lbar_ceil,lower,upper,naive") {
        detail = "unexpected header: " + line;
        return false;
    }
    struct Row {
        unsigned long long f, lbar, lower, upper, naive;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        Row r;
        char comma;
        std::istringstream ls(line);
        if (ls >> r.f >> comma >> r.lbar >> comma >> r.lower >> comma >> r.upper >> comma >> r.naive)
            rows.push_back(r);
    }
    if (rows.size() != 33) {
        detail = "expected 33 rows, got " + std::to_string(rows.size());
        return false;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (r.f != i) {
            detail = "row order broken at index " + std::to_string(i);
            return false;
        }
        if (i > 0 && r.upper < rows[i - 1].upper) {
            detail = "upper decreases at f=" + std::to_string(r.f);
            return false;
        }
        if (r.f == 1 && (r.upper != 12 || r.lower != 11)) {
            detail = "f=1 row has lower/upper " + std::to_string(r.lower) + "/" + std::to_string(r.upper);
            return false;
        }
        if (r.f >= 16 && (r.upper != 64 || r.naive != 64)) {
            detail = "f=" + std::to_string(r.f) + " upper/naive " + std::to_string(r.upper) + "/" +
                     std::to_string(r.naive);
            return false;
        }
    }
    detail = "33 rows; f=1 gives 11/12, plateau at 64 from f=16";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 6: the exhaustive privacy audit measures total-variation
// distance exactly 0 per database for the 2-bit, 3-bit and three-database
// schemes, and a planner that pins the desired message's permutation is
// caught with distance > 0.

bool check_privacy_audit(std::string& detail) {
    for (PirParams params : {PirParams{2, 2, 2}, PirParams{2, 2, 3}, PirParams{3, 2, 3}}) {
        AuditReport report = audit_privacy(params, default_planner(), {AuditMode::kExhaustive, 0, 1u << 21});
        if (!report.passed()) {
            detail = "leak reported for N=" + std::to_string(params.databases) +
                     " ell=" + std::to_string(params.ell) + ": " + report.max_distance.str();
            return false;
        }
        for (const Rational& d : report.per_db_distance)
            if (d != Rational(0)) {
                detail = "nonzero per-database distance";
                return false;
            }
    }

    Planner pinned = [](const PirParams& p, std::size_t theta, const PlanRandomness& r) {
        PlanRandomness broken = r;
        for (std::size_t i = 0; i < p.ell; ++i) broken.perms[theta - 1][i] = i + 1;
        return plan_with_randomness(p, theta, broken);
    };
    AuditReport leaky = audit_privacy({2, 2, 3}, pinned, {AuditMode::kExhaustive, 0, 1u << 21});
    if (leaky.passed()) {
        detail = "negative control not detected";
        return false;
    }
    detail = "distance 0 on all three schemes; pinned permutation detected at " + leaky.max_distance.str();
    return true;
}

// ---------------------------------------------------------------------------
// criterion 7: the syndrome decoder agrees with brute-force nearest-coset
// search on every code of length <= 8, for all syndromes and stale words.

bool check_decoder_oracle(std::string& detail) {
    struct Entry {
        CodeSpec spec;
        std::size_t f;
    };
    std::vector<Entry> entries{{{3, 1, CodeConstruction::kRepetition, 0}, 1},
                               {{5, 1, CodeConstruction::kFiveBitDemo, 0}, 1},
                               {{5, 2, CodeConstruction::kRepetition, 0}, 2},
                               {{6, 1, CodeConstruction::kGreedy, 0}, 1},
                               {{7, 1, CodeConstruction::kGreedy, 0}, 1},
                               {{7, 3, CodeConstruction::kRepetition, 0}, 3},
                               {{8, 1, CodeConstruction::kGreedy, 0}, 1},
                               {{8, 2, CodeConstruction::kGreedy, 0}, 2}};

    std::size_t cases = 0;
    for (const Entry& e : entries) {
        LinearCode code = code_for(e.spec);
        const std::size_t n = code.n;
        const std::size_t r = code.syndrome_length();

        std::vector<std::vector<BitWord>> cosets(std::size_t{1} << r);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            BitWord w = BitWord::from_be_value(n, v);
            cosets[mat_vec_mul(code.parity_check, w).as_key()].push_back(w);
        }

        for (std::uint64_t sv = 0; sv < (std::uint64_t{1} << r); ++sv) {
            BitWord sw = BitWord::from_be_value(r, sv);
            Syndrome fresh{sw, code.id()};
            for (std::uint64_t wv = 0; wv < (std::uint64_t{1} << n); ++wv) {
                BitWord stale = BitWord::from_be_value(n, wv);
                std::size_t best = n + 1, ties = 0;
                const BitWord* argmin = nullptr;
                for (const BitWord& w : cosets[sw.as_key()]) {
                    std::size_t d = hamming_distance(w, stale);
                    if (d < best) {
                        best = d;
                        ties = 1;
                        argmin = &w;
                    } else if (d == best) {
                        ++ties;
                    }
                }
                ++cases;
                if (best <= e.f) {
                    if (ties != 1) {
                        detail = "non-unique minimizer inside the decoding radius";
                        return false;
                    }
                    DecodeResult dec = update_decode(code, stale, fresh, e.f);
                    if (dec.updated != *argmin || dec.flip_positions.size() != best) {
                        detail = "decoder disagrees with brute force on [" + std::to_string(n) + "," +
                                 std::to_string(code.k) + "]";
                        return false;
                    }
                } else {
                    try {
                        update_decode(code, stale, fresh, e.f);
                        detail = "decoder invented a pattern beyond the radius";
                        return false;
                    } catch (const DecodeError&) {
                    }
                }
            }
        }
    }
    detail = std::to_string(cases) + " (syndrome, stale) cases across " + std::to_string(entries.size()) + " codes";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 8: greedy construction sweep: for every L <= 16 with a
// compressing flip bound, and L=32 with f in {1,2,3}, build the code and
// certify its distance; plus the perfect-code classifications.

bool check_code_construction(std::string& detail) {
    if (!is_perfect(code_for(CodeSpec{3, 1, CodeConstruction::kRepetition, 0}), 1)) {
        detail = "[3,1] repetition not recognized as perfect";
        return false;
    }
    if (is_perfect(code_for(CodeSpec{5, 1, CodeConstruction::kFiveBitDemo, 0}), 1)) {
        detail = "[5,2] demo code wrongly called perfect";
        return false;
    }

    std::vector<std::pair<std::size_t, std::size_t>> targets;
    for (std::size_t l = 1; l <= 16; ++l)
        for (std::size_t f = 1; lbar_ceil(l, f) < l; ++f) targets.emplace_back(l, f);
    for (std::size_t f : {1, 2, 3}) targets.emplace_back(32, f);

    std::size_t built = 0;
    std::string failures;
    for (auto [l, f] : targets) {
        std::size_t r = lbar_ceil(l, f);
        try {
            LinearCode code = build_gv_code(l, r, 2 * f + 1, 0);
            if (!certify_distance(code, 2 * f + 1)) {
                failures += " (" + std::to_string(l) + "," + std::to_string(f) + "):uncertified";
                continue;
            }
            ++built;
        } catch (const CodeConstructionError& e) {
            failures += " (" + std::to_string(l) + "," + std::to_string(f) + "):" +
                        (e.reason() == CodeConstructionError::Reason::kInfeasible ? "infeasible" : "exhausted");
        }
    }

    if (!failures.empty()) {
        detail = std::to_string(built) + "/" + std::to_string(targets.size()) +
                 " targets built; unreachable:" + failures;
        return false;
    }
    detail = "all " + std::to_string(targets.size()) + " targets built and certified";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 9: exact-one-flip service on 8-bit messages: every message
// value, every flip position, both targets -> position named, 5 bits down;
// the bounded-flip service on the same parameters needs 6.

bool check_one_flip_service(std::string& detail) {
    SystemConfig one_flip = make_config(2, 2, 8, 1, UpdateMode::kExactOneFlip, 3);
    std::mt19937_64 rng(41);
    std::size_t runs = 0;
    for (std::uint64_t v = 0; v < 256; ++v) {
        BitWord desired = BitWord::from_be_value(8, v);
        BitWord other = BitWord::from_be_value(8, rng() & 0xff);
        for (std::size_t theta = 1; theta <= 2; ++theta) {
            MessageLibrary lib;
            lib.messages = theta == 1 ? std::vector<BitWord>{desired, other}
                                      : std::vector<BitWord>{other, desired};
            for (std::size_t pos = 1; pos <= 8; ++pos) {
                BitWord stale = desired;
                stale.flip(pos);
                InMemoryTransport transport = in_memory_transport(one_flip, lib);
                UpdateReport report = run_update(one_flip, UpdateInstance{theta, stale, 1}, transport, rng());
                if (report.updated != desired || report.flip_positions != std::vector<std::size_t>{pos} ||
                    report.bits_downloaded != 5) {
                    detail = "one-flip failure at value " + std::to_string(v) + " position " + std::to_string(pos);
                    return false;
                }
                ++runs;
            }
        }
    }

    SystemConfig bounded = make_config(2, 2, 8, 1, UpdateMode::kBoundedFlips, 3);
    MessageLibrary lib = random_library(2, 8, 101);
    BitWord stale = lib.messages[0];
    stale.flip(3);
    InMemoryTransport transport = in_memory_transport(bounded, lib);
    UpdateReport report = run_update(bounded, UpdateInstance{1, stale, 1}, transport, 9);
    if (report.updated != lib.messages[0] || report.bits_downloaded != 6) {
        detail = "bounded mode cost " + std::to_string(report.bits_downloaded) + " != 6";
        return false;
    }
    detail = std::to_string(runs) + " one-flip runs at cost 5; bounded mode costs 6";
    return true;
}

// ---------------------------------------------------------------------------
// criterion 10: two real server processes over TCP; the CLI update must
// succeed at cost 3 on the 3-bit configuration and its wire transcripts must
// equal the in-memory transport's byte for byte.

bool check_distributed_parity(std::string& detail) {
    MessageLibrary lib = random_library(2, 3, 77);
    BitWord stale = lib.messages[0];
    stale.flip(2);

    auto lib_path = g_tmp / "library.pulb";
    auto stale_path = g_tmp / "stale.pulb";
    write_file(lib_path.string(), encode_library(lib.messages));
    write_file(stale_path.string(), encode_library({stale}));

    std::vector<pid_t> pids;
    auto stop_servers = [&] {
        for (pid_t pid : pids) {
            kill(pid, SIGTERM);
            waitpid(pid, nullptr, 0);
        }
        pids.clear();
    };

    try {
        std::vector<std::uint16_t> ports;
        for (int i = 0; i < 2; ++i) {
            auto port_file = g_tmp / ("port" + std::to_string(i));
            pids.push_back(spawn({g_cli, "serve", "--bind", "127.0.0.1:0", "--library", lib_path.string(),
                                  "--n", "2", "--f", "1", "--seed", "5", "--port-file", port_file.string()},
                                 (g_tmp / ("server" + std::to_string(i) + ".log")).string()));
            ports.push_back(wait_for_port(port_file));
        }

        std::string endpoints = "127.0.0.1:" + std::to_string(ports[0]) + ",127.0.0.1:" + std::to_string(ports[1]);
        auto transcript_prefix = (g_tmp / "tcp").string();
        int exit_code = 0;
        std::string out = run_command(g_cli + " update --endpoints " + endpoints + " --outdated " +
                                          stale_path.string() + " --theta 1 --k 2 --f 1 --seed 9 --transcript " +
                                          transcript_prefix,
                                      exit_code);
        stop_servers();
        if (exit_code != 0) {
            detail = "update exited with " + std::to_string(exit_code);
            return false;
        }
        auto kv = parse_report(out);
        if (kv["updated"] != lib.messages[0].to_string() || kv["bits-downloaded"] != "3") {
            detail = "update reported " + kv["updated"] + " at cost " + kv["bits-downloaded"];
            return false;
        }

        SystemConfig config = make_config(2, 2, 3, 1, UpdateMode::kBoundedFlips, 9);
        InMemoryTransport loopback = in_memory_transport(config, lib);
        UpdateReport mem = run_update(config, UpdateInstance{1, stale, 1}, loopback, 9);
        if (mem.updated != lib.messages[0]) {
            detail = "loopback update failed";
            return false;
        }
        for (std::size_t db = 1; db <= 2; ++db) {
            Bytes expected;
            for (const Bytes& frame : loopback.transcripts()[db - 1])
                expected.insert(expected.end(), frame.begin(), frame.end());
            Bytes actual = read_file(transcript_prefix + ".db" + std::to_string(db));
            if (actual != expected) {
                detail = "transcript mismatch for database " + std::to_string(db);
                return false;
            }
        }
    } catch (...) {
        stop_servers();
        throw;
    }
    detail = "CLI update over TCP: cost 3, transcripts identical to loopback";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli-binary>\n";
        return 2;
    }
    g_cli = argv[1];

    char tmpl[] = "/tmp/privup-accept-XXXXXX";
    if (!mkdtemp(tmpl)) {
        std::cerr << "cannot create a scratch directory\n";
        return 2;
    }
    g_tmp = tmpl;

    struct Criterion {
        const char* title;
        std::function<bool(std::string&)> run;
    };
    std::vector<Criterion> criteria{
        {"exhaustive 3-bit update, cost 3", check_full_enumeration_3bit},
        {"exhaustive 5-bit update, cost 5, bounds 4/5", check_full_enumeration_5bit},
        {"bound sandwich across the parameter sweep", check_bound_sandwich},
        {"compression threshold at f >= L/2", check_compression_threshold},
        {"CLI cost curve for 10 messages of 32 bits", check_cli_curve},
        {"exhaustive privacy audit with negative control", check_privacy_audit},
        {"decoder equals brute-force coset search", check_decoder_oracle},
        {"greedy code sweep with certified distances", check_code_construction},
        {"exact-one-flip service at cost 5 (bounded: 6)", check_one_flip_service},
        {"TCP processes match loopback transcripts", check_distributed_parity},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::cout << "criterion " << (i + 1 < 10 ? " " : "") << i + 1 << ": " << (ok ? "PASS" : "FAIL") << "  "
                  << criteria[i].title << (detail.empty() ? "" : "  [" + detail + "]") << "\n";
    }

    std::error_code ec;
    std::filesystem::remove_all(g_tmp, ec);

    std::cout << criteria.size() - failures << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
