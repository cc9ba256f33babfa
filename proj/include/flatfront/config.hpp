#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatfront/front.hpp"

namespace flatfront {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProbeSettings {
    std::vector<double> heights;  // slice heights, largest first
    int samples = 512;            // angular samples per sheet
    PolarGrid grid;               // mesh grid in the chart of an end
};

/// Front description as read from a JSON document.
///
/// Points are a number, [re, im], {"re": x, "im": y}, {"unity": [k, j]} for
/// e^{2 pi i j/k}, or "inf". Expressions are strings in the parser grammar; any
/// names other than z, i, exp and log are taken from "params".
struct FrontSpec {
    std::string name;
    std::string G;
    std::optional<std::string> omega, Gstar;
    std::map<std::string, cplx> params;
    cplx delta{1.0, 0.0};
    std::vector<ExpansionPoint> ends;
    std::vector<ExpansionPoint> umbilics;  // extra caustic points (zeros of Q)
    std::optional<cplx> basepoint;
    int truncation = kDefaultTruncation;
    std::optional<int> covering_sheets;
    ProbeSettings probe;

    WeierstrassData data() const;
};

FrontSpec parse_front_spec(const std::string& json_text);
FrontSpec load_front_spec(const std::string& path);

/// "inf" or "re+im i" with fixed precision, for labels and CSV.
std::string format_point(const ExpansionPoint& p);

}  // namespace flatfront
