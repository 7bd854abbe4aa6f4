// End-to-end tour: two databases store two 5-bit messages, a client holds a
// copy of message 1 that is stale in at most one position and fetches just
// enough to repair it, without revealing which message it cares about.

#include <iostream>

#include "privup/privup.hpp"

using namespace privup;

int main() {
    SystemConfig config = make_config(2, 2, 5, 1, UpdateMode::kBoundedFlips, 7,
                                      CodeConstruction::kFiveBitDemo);

    MessageLibrary library;
    library.messages = {BitWord{1, 0, 1, 1, 0}, BitWord{0, 1, 1, 0, 1}};

    UpdateInstance instance;
    instance.theta = 1;
    instance.outdated = library.messages[0];
    instance.outdated.flip(3);
    instance.max_flips = 1;

    std::cout << "fresh   " << library.messages[0].to_string() << "\n"
              << "stale   " << instance.outdated.to_string() << "\n";

    SavingsReport s = savings(config);
    std::cout << "download bounds: lower " << s.bounds.lower << ", upper " << s.bounds.upper
              << ", full refetch " << s.bounds.naive << "\n";

    InMemoryTransport transport = in_memory_transport(config, library);
    UpdateReport report = run_update(config, instance, transport);

    std::cout << "updated " << report.updated.to_string() << " after downloading "
              << report.bits_downloaded << " bits";
    std::cout << " (flipped position";
    for (std::size_t p : report.flip_positions) std::cout << " " << p;
    std::cout << ")\n";

    PirParams params{config.databases, config.messages, 3};
    AuditReport audit = audit_privacy(params, default_planner(), AuditOptions{});
    std::cout << "privacy audit over " << audit.configs_per_theta
              << " randomness configurations per message: max distance " << audit.max_distance.str() << "\n";

    return report.updated == library.messages[0] && audit.passed() ? 0 : 1;
}
