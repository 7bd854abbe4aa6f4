#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privup/privup.hpp"

namespace {

using namespace privup;

std::string yes_no(bool v) { return v ? "yes" : "no"; }

void print_bounds(const BoundsReport& b) {
    std::cout << "lbar_ceil " << b.lbar_ceil << "\n"
              << "lower " << b.lower << "\n"
              << "upper " << b.upper << "\n"
              << "naive " << b.naive << "\n"
              << "gap " << b.gap << "\n";
}

int cmd_bounds(unsigned n, unsigned k, unsigned l, unsigned f) {
    BoundsReport b = compute_bounds(n, k, l, f);
    BigInt ball = ball_size(l, f);
    std::cout << "N " << n << "\nK " << k << "\nL " << l << "\nf " << f << "\n";
    print_bounds(b);
    std::cout << "ball " << ball.str() << "\n"
              << "perfect " << yes_no(is_power_of_two(ball)) << "\n";
    return 0;
}

int cmd_curve(unsigned n, unsigned k, unsigned l, unsigned f_min, unsigned f_max) {
    if (f_max > l) f_max = l;
    std::cout << "f,lbar_ceil,lower,upper,naive\n";
    for (unsigned f = f_min; f <= f_max; ++f) {
        BoundsReport b = compute_bounds(n, k, l, f);
        std::cout << f << "," << b.lbar_ceil << "," << b.lower << "," << b.upper << "," << b.naive << "\n";
    }
    return 0;
}

int cmd_audit(std::size_t n, std::size_t k, std::size_t ell, bool montecarlo, bool joint,
              std::size_t trials, std::size_t budget) {
    PirParams params{n, k, ell};
    AuditReport report;
    if (joint) {
        report = audit_privacy_joint(params, default_planner(), budget);
    } else {
        AuditOptions opts;
        opts.mode = montecarlo ? AuditMode::kMonteCarlo : AuditMode::kExhaustive;
        opts.trials = trials;
        opts.budget = budget;
        report = audit_privacy(params, default_planner(), opts);
    }
    std::cout << "mode " << (report.mode == AuditMode::kExhaustive ? (joint ? "joint" : "exhaustive") : "montecarlo")
              << "\nconfigs-per-theta " << report.configs_per_theta << "\n";
    for (std::size_t db = 0; db < report.per_db_distance.size(); ++db)
        std::cout << "db" << db + 1 << "-distance " << report.per_db_distance[db].str() << "\n";
    std::cout << "max-distance " << report.max_distance.str() << "\n";
    bool exact = report.mode == AuditMode::kExhaustive;
    if (exact) std::cout << "private " << yes_no(report.passed()) << "\n";
    return exact && !report.passed() ? 1 : 0;
}

int cmd_simulate(std::size_t n, std::size_t k, std::size_t l, std::size_t f, UpdateMode mode,
                 CodeConstruction construction, std::size_t trials, std::uint64_t seed) {
    SystemConfig config = make_config(n, k, l, f, mode, seed, construction);
    std::size_t passes = 0, met_upper = 0;
    std::size_t cost_min = SIZE_MAX, cost_max = 0;
    unsigned long long cost_total = 0;
    BoundsReport bounds{};

    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (t + 1)));
        MessageLibrary lib = random_library(k, l, rng());
        std::size_t theta = 1 + rng() % k;

        UpdateInstance instance;
        instance.theta = theta;
        instance.max_flips = f;
        if (mode == UpdateMode::kExactOneFlip) {
            instance.outdated = lib.messages[theta - 1];
            instance.outdated.flip(1 + rng() % l);
        } else if (mode == UpdateMode::kBoundedFlips) {
            instance.outdated = lib.messages[theta - 1] ^ random_flip_pattern(l, f, rng);
        } else {
            instance.outdated = random_library(1, l, rng()).messages[0];
        }

        InMemoryTransport transport = in_memory_transport(config, lib);
        UpdateReport report = run_update(config, instance, transport, rng());
        bounds = report.bounds;
        if (report.updated == lib.messages[theta - 1]) ++passes;
        if (report.met_upper_bound) ++met_upper;
        cost_min = std::min(cost_min, report.bits_downloaded);
        cost_max = std::max(cost_max, report.bits_downloaded);
        cost_total += report.bits_downloaded;
    }

    std::cout << "mode " << to_string(mode) << "\ntrials " << trials << "\npasses " << passes << "\n"
              << "pass-rate " << (trials ? 100.0 * static_cast<double>(passes) / static_cast<double>(trials) : 0.0)
              << "%\n";
    if (trials) {
        std::cout << "cost-min " << cost_min << "\ncost-max " << cost_max << "\ncost-mean "
                  << static_cast<double>(cost_total) / static_cast<double>(trials) << "\n";
        print_bounds(bounds);
        std::cout << "met-upper " << met_upper << "\n";
    }
    return passes == trials ? 0 : 1;
}

int cmd_gen_code(std::size_t l, std::size_t f, std::uint64_t seed, CodeConstruction construction,
                 const std::string& out) {
    LinearCode code = code_for(CodeSpec{l, f, construction, seed});
    write_file(out, encode_code(code));
    std::cout << "n " << code.n << "\nk " << code.k << "\nsyndrome-bits " << code.syndrome_length() << "\n"
              << "certified-distance " << code.certified_distance << "\n"
              << "perfect " << yes_no(is_perfect(code, f)) << "\nwrote " << out << "\n";
    return 0;
}

int cmd_gen_library(std::size_t k, std::size_t l, std::uint64_t seed, const std::string& out) {
    MessageLibrary lib = random_library(k, l, seed);
    write_file(out, encode_library(lib.messages));
    std::cout << "messages " << k << "\nbits-per-message " << l << "\nwrote " << out << "\n";
    return 0;
}

int cmd_serve(const std::string& bind, const std::string& library_path, const std::string& code_path,
              std::size_t n, std::size_t f, UpdateMode mode, std::uint64_t seed,
              CodeConstruction construction, const std::string& port_file) {
    MessageLibrary lib{decode_library(read_file(library_path))};
    if (lib.messages.empty()) throw std::runtime_error("library file holds no messages");
    SystemConfig config =
        make_config(n, lib.messages.size(), lib.messages[0].size(), f, mode, seed, construction);

    std::optional<LinearCode> code;
    if (!code_path.empty()) code = decode_code(read_file(code_path));

    net::Endpoint ep = net::parse_endpoint(bind);
    TcpServer server(ServerCore(config, lib, code ? &*code : nullptr));
    std::uint16_t port = server.start(ep.host, ep.port);
    if (!port_file.empty()) write_file(port_file, [&] {
        std::string s = std::to_string(port);
        return Bytes(s.begin(), s.end());
    }());
    std::cout << "listening " << ep.host << ":" << port << std::endl;
    server.wait();
    return 0;
}

int cmd_update(const std::string& endpoints_csv, const std::string& outdated_path, std::size_t theta,
               std::size_t k, std::size_t f, UpdateMode mode, std::uint64_t seed,
               CodeConstruction construction, const std::string& code_path,
               const std::string& transcript_prefix) {
    std::vector<net::Endpoint> endpoints;
    std::stringstream ss(endpoints_csv);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) endpoints.push_back(net::parse_endpoint(part));
    if (endpoints.size() < 2) throw std::runtime_error("need at least two database endpoints");

    std::vector<BitWord> outdated_msgs = decode_library(read_file(outdated_path));
    if (outdated_msgs.size() != 1) throw std::runtime_error("outdated file must hold exactly one message");
    const BitWord& outdated = outdated_msgs[0];

    SystemConfig config = make_config(endpoints.size(), k, outdated.size(), f, mode, seed, construction);
    UpdateInstance instance{theta, outdated, f};

    std::optional<LinearCode> code;
    if (!code_path.empty()) {
        code = decode_code(read_file(code_path));
        std::size_t needed = std::min(2 * f + 1, code->n + 1);
        if (!certify_distance(*code, needed))
            throw std::runtime_error("code file cannot correct " + std::to_string(f) + " flips");
    }

    TcpTransport transport(endpoints);
    UpdateReport report = run_update(config, instance, transport, seed, code ? &*code : nullptr);

    std::cout << "updated " << report.updated.to_string() << "\nflips " << report.flip_positions.size() << "\n";
    std::cout << "flip-positions";
    for (std::size_t p : report.flip_positions) std::cout << " " << p;
    std::cout << "\nbits-downloaded " << report.bits_downloaded << "\n";
    print_bounds(report.bounds);
    std::cout << "met-upper " << yes_no(report.met_upper_bound) << "\n";

    if (!transcript_prefix.empty()) {
        for (std::size_t db = 1; db <= endpoints.size(); ++db) {
            Bytes all;
            for (const Bytes& frame : transport.transcripts()[db - 1])
                all.insert(all.end(), frame.begin(), frame.end());
            write_file(transcript_prefix + ".db" + std::to_string(db), all);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"private updating over replicated databases"};
    app.require_subcommand(1);

    std::map<std::string, UpdateMode> mode_map{{"bounded", UpdateMode::kBoundedFlips},
                                               {"one-flip", UpdateMode::kExactOneFlip},
                                               {"naive", UpdateMode::kNaive}};
    std::map<std::string, CodeConstruction> construction_map{{"greedy", CodeConstruction::kGreedy},
                                                             {"repetition", CodeConstruction::kRepetition},
                                                             {"demo5", CodeConstruction::kFiveBitDemo}};

    int rc = 0;

    {
        auto* c = app.add_subcommand("bounds", "download bounds for one parameter set");
        auto n = std::make_shared<unsigned>(2);
        auto k = std::make_shared<unsigned>(2);
        auto l = std::make_shared<unsigned>(0);
        auto f = std::make_shared<unsigned>(0);
        c->add_option("--n", *n, "databases")->required();
        c->add_option("--k", *k, "messages")->required();
        c->add_option("--l", *l, "bits per message")->required();
        c->add_option("--f", *f, "flip bound")->required();
        c->callback([=, &rc] { rc = cmd_bounds(*n, *k, *l, *f); });
    }
    {
        auto* c = app.add_subcommand("curve", "CSV of bounds across flip counts");
        auto n = std::make_shared<unsigned>(2);
        auto k = std::make_shared<unsigned>(2);
        auto l = std::make_shared<unsigned>(0);
        auto f_min = std::make_shared<unsigned>(0);
        auto f_max = std::make_shared<unsigned>(UINT32_MAX);
        c->add_option("--n", *n, "databases")->required();
        c->add_option("--k", *k, "messages")->required();
        c->add_option("--l", *l, "bits per message")->required();
        c->add_option("--f-min", *f_min, "first flip count");
        c->add_option("--f-max", *f_max, "last flip count (default L)");
        c->callback([=, &rc] { rc = cmd_curve(*n, *k, *l, *f_min, *f_max); });
    }
    {
        auto* c = app.add_subcommand("audit", "query-distribution privacy audit");
        auto n = std::make_shared<std::size_t>(2);
        auto k = std::make_shared<std::size_t>(2);
        auto ell = std::make_shared<std::size_t>(0);
        auto l = std::make_shared<std::size_t>(0);
        auto f = std::make_shared<std::size_t>(0);
        auto trials = std::make_shared<std::size_t>(2000);
        auto budget = std::make_shared<std::size_t>(std::size_t{1} << 21);
        auto montecarlo = std::make_shared<bool>(false);
        auto joint = std::make_shared<bool>(false);
        c->add_option("--n", *n, "databases")->required();
        c->add_option("--k", *k, "messages")->required();
        auto* ell_opt = c->add_option("--ell", *ell, "record bits served per message");
        auto* l_opt = c->add_option("--l", *l, "bits per message (with --f, sets --ell)");
        c->add_option("--f", *f, "flip bound (with --l)")->needs(l_opt);
        c->add_flag("--montecarlo", *montecarlo, "sampled audit instead of exhaustive");
        c->add_flag("--joint", *joint, "exhaustive audit of (query, answers) with enumerated libraries");
        c->add_option("--trials", *trials, "montecarlo sample count");
        c->add_option("--budget", *budget, "exhaustive state-space cap");
        l_opt->excludes(ell_opt);
        c->callback([=, &rc] {
            std::size_t e = *ell;
            if (ell_opt->count() == 0) {
                if (l_opt->count() == 0) throw CLI::ValidationError("audit", "need --ell or --l/--f");
                e = lbar_ceil(*l, *f);
            }
            rc = cmd_audit(*n, *k, e, *montecarlo, *joint, *trials, *budget);
        });
    }
    {
        auto* c = app.add_subcommand("simulate", "randomized end-to-end updates in memory");
        auto n = std::make_shared<std::size_t>(2);
        auto k = std::make_shared<std::size_t>(2);
        auto l = std::make_shared<std::size_t>(0);
        auto f = std::make_shared<std::size_t>(0);
        auto trials = std::make_shared<std::size_t>(1000);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto mode = std::make_shared<UpdateMode>(UpdateMode::kBoundedFlips);
        auto construction = std::make_shared<CodeConstruction>(CodeConstruction::kGreedy);
        c->add_option("--n", *n, "databases")->required();
        c->add_option("--k", *k, "messages")->required();
        c->add_option("--l", *l, "bits per message")->required();
        c->add_option("--f", *f, "flip bound")->required();
        c->add_option("--trials", *trials, "number of runs");
        c->add_option("--seed", *seed, "master seed");
        c->add_option("--mode", *mode, "update mode")->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case));
        c->add_option("--construction", *construction, "code construction")
            ->transform(CLI::CheckedTransformer(construction_map, CLI::ignore_case));
        c->callback([=, &rc] { rc = cmd_simulate(*n, *k, *l, *f, *mode, *construction, *trials, *seed); });
    }
    {
        auto* c = app.add_subcommand("gen-code", "build a code and write it as a PUCD file");
        auto l = std::make_shared<std::size_t>(0);
        auto f = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto construction = std::make_shared<CodeConstruction>(CodeConstruction::kGreedy);
        auto out = std::make_shared<std::string>();
        c->add_option("--l", *l, "code length")->required();
        c->add_option("--f", *f, "flips the code must correct")->required();
        c->add_option("--seed", *seed, "construction seed");
        c->add_option("--construction", *construction, "code construction")
            ->transform(CLI::CheckedTransformer(construction_map, CLI::ignore_case));
        c->add_option("--out", *out, "output path")->required();
        c->callback([=, &rc] { rc = cmd_gen_code(*l, *f, *seed, *construction, *out); });
    }
    {
        auto* c = app.add_subcommand("gen-library", "write a random message library as a PULB file");
        auto k = std::make_shared<std::size_t>(0);
        auto l = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto out = std::make_shared<std::string>();
        c->add_option("--k", *k, "messages")->required();
        c->add_option("--l", *l, "bits per message")->required();
        c->add_option("--seed", *seed, "generator seed");
        c->add_option("--out", *out, "output path")->required();
        c->callback([=, &rc] { rc = cmd_gen_library(*k, *l, *seed, *out); });
    }
    {
        auto* c = app.add_subcommand("serve", "run one database server");
        auto bind = std::make_shared<std::string>("127.0.0.1:0");
        auto library = std::make_shared<std::string>();
        auto code = std::make_shared<std::string>();
        auto port_file = std::make_shared<std::string>();
        auto n = std::make_shared<std::size_t>(2);
        auto f = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto mode = std::make_shared<UpdateMode>(UpdateMode::kBoundedFlips);
        auto construction = std::make_shared<CodeConstruction>(CodeConstruction::kGreedy);
        c->add_option("--bind", *bind, "host:port to listen on (port 0 = ephemeral)");
        c->add_option("--library", *library, "PULB library file")->required();
        c->add_option("--code", *code, "PUCD code file (otherwise derived from flags)");
        c->add_option("--port-file", *port_file, "write the bound port here");
        c->add_option("--n", *n, "databases in the deployment")->required();
        c->add_option("--f", *f, "flip bound")->required();
        c->add_option("--seed", *seed, "code construction seed");
        c->add_option("--mode", *mode, "update mode")->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case));
        c->add_option("--construction", *construction, "code construction")
            ->transform(CLI::CheckedTransformer(construction_map, CLI::ignore_case));
        c->callback([=, &rc] { rc = cmd_serve(*bind, *library, *code, *n, *f, *mode, *seed, *construction, *port_file); });
    }
    {
        auto* c = app.add_subcommand("update", "run a private update against live servers");
        auto endpoints = std::make_shared<std::string>();
        auto outdated = std::make_shared<std::string>();
        auto theta = std::make_shared<std::size_t>(0);
        auto k = std::make_shared<std::size_t>(0);
        auto f = std::make_shared<std::size_t>(0);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto mode = std::make_shared<UpdateMode>(UpdateMode::kBoundedFlips);
        auto construction = std::make_shared<CodeConstruction>(CodeConstruction::kGreedy);
        auto code = std::make_shared<std::string>();
        auto transcript = std::make_shared<std::string>();
        c->add_option("--endpoints", *endpoints, "comma-separated host:port list, one per database")->required();
        c->add_option("--outdated", *outdated, "PULB file holding the stale copy (one message)")->required();
        c->add_option("--theta", *theta, "index of the message to update (1-based)")->required();
        c->add_option("--k", *k, "messages stored by the databases")->required();
        c->add_option("--f", *f, "flip bound")->required();
        c->add_option("--seed", *seed, "plan seed");
        c->add_option("--mode", *mode, "update mode")->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case));
        c->add_option("--construction", *construction, "code construction")
            ->transform(CLI::CheckedTransformer(construction_map, CLI::ignore_case));
        c->add_option("--code", *code, "PUCD code file (otherwise derived from flags)");
        c->add_option("--transcript", *transcript, "write per-database wire transcripts to PREFIX.dbN");
        c->callback([=, &rc] {
            rc = cmd_update(*endpoints, *outdated, *theta, *k, *f, *mode, *seed, *construction, *code, *transcript);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
