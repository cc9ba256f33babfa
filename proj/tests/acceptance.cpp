// One PASS/FAIL line per acceptance criterion; nonzero exit when any fails.

#include <iostream>

#include "flatfront/acceptance.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : flatfront::default_data_dir();
    bool all = true;
    for (const auto& r : flatfront::run_acceptance(dir)) {
        std::cout << flatfront::format_result(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
