#pragma once

#include <string>
#include <vector>

namespace flatfront {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;  // measured values, or the error that stopped the check
    double seconds = 0.0;
};

/// Bundled example directory baked in at build time.
std::string default_data_dir();

/// Runs the acceptance criteria on the bundled examples; only = {} runs all eleven.
std::vector<CriterionResult> run_acceptance(const std::string& data_dir, const std::vector<int>& only = {});

/// "PASS [id] title: detail (t s)"
std::string format_result(const CriterionResult& r);

}  // namespace flatfront
