// Acceptance harness: runs the full suite and prints one verdict line per
// criterion. Timings and progress go to stderr; stdout is deterministic.

#include "binq4/suite.hpp"

#include <cstring>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    binq4::SuiteOptions opt;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> long { return i + 1 < argc ? std::atol(argv[++i]) : 0; };
        if (arg == "--curves")
            opt.curve_samples = next();
        else if (arg == "--family")
            opt.family_size = next();
        else if (arg == "--pairs")
            opt.identity_pairs = next();
        else if (arg == "--instances")
            opt.identity_instances = next();
        else if (arg == "--seed")
            opt.seed = static_cast<unsigned long long>(next());
        else if (arg == "--no-determinism")
            opt.check_determinism = false;
        else {
            std::cerr << "unknown option: " << arg << "\n";
            return 2;
        }
    }

    binq4::SuiteReport rep = binq4::run_suite(opt, std::cerr);
    for (size_t i = 0; i < rep.checks.size(); ++i) {
        const auto& c = rep.checks[i];
        std::cout << "criterion-" << (i + 1) << " " << (c.pass ? "PASS" : "FAIL") << " "
                  << c.name << " (" << c.detail << ")\n";
    }
    std::cout << (rep.all_pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "\n";
    return rep.all_pass ? 0 : 1;
}
