#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv)
{
    cuntz::acceptance::Options opt;
    opt.fixtures = CUNTZ_DEFAULT_FIXTURE_DIR;
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--fixtures" && k + 1 < argc) {
            opt.fixtures = argv[++k];
        } else if (arg == "--seed" && k + 1 < argc) {
            opt.seed = std::stoull(argv[++k]);
        } else {
            std::cerr << "usage: cuntz_acceptance_suite [--fixtures DIR] [--seed N]\n";
            return 1;
        }
    }
    const auto results = cuntz::acceptance::run_all(opt);
    cuntz::acceptance::print(std::cout, results);
    return cuntz::acceptance::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
