#include <cstring>
#include <iostream>

#include "dkap/acceptance.hpp"

int main(int argc, char** argv) {
    dkap::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-performance") == 0) opts.include_performance = false;
    }
    opts.on_result = [](const dkap::CriterionResult& r) { std::cout << dkap::format_result_line(r) << std::endl; };
    const auto results = dkap::run_acceptance(opts);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
