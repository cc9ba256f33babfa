#include "flatfront/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace flatfront {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {"name",     "G",          "omega",      "Gstar",
                                     "params",   "delta",      "ends",       "umbilics",
                                     "basepoint", "truncation", "covering_sheets", "probe"};
const std::set<std::string> kProbeKeys = {"heights", "samples", "grid"};
const std::set<std::string> kGridKeys = {"r_min", "r_max", "radial", "angular", "sheets"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(what + ": not finite");
    return x;
}

int integer(const json& v, const std::string& what, int lo) {
    if (!v.is_number_integer()) throw ConfigError(what + ": expected an integer");
    auto x = v.get<long long>();
    if (x < lo || x > 1'000'000) throw ConfigError(what + ": out of range");
    return static_cast<int>(x);
}

cplx complex_value(const json& v, const std::string& what) {
    if (v.is_number()) return number(v, what);
    if (v.is_array()) {
        if (v.size() != 2) throw ConfigError(what + ": expected [re, im]");
        return {number(v[0], what), number(v[1], what)};
    }
    if (v.is_object()) {
        if (v.contains("unity")) {
            const json& u = v["unity"];
            if (v.size() != 1 || !u.is_array() || u.size() != 2)
                throw ConfigError(what + ": expected {\"unity\": [k, j]}");
            int k = integer(u[0], what, 1), j = integer(u[1], what, 0);
            return std::polar(1.0, 2.0 * std::numbers::pi * j / k);
        }
        reject_unknown(v, {"re", "im"}, what);
        double re = v.contains("re") ? number(v["re"], what) : 0.0;
        double im = v.contains("im") ? number(v["im"], what) : 0.0;
        return {re, im};
    }
    throw ConfigError(what + ": expected a complex value");
}

ExpansionPoint point_value(const json& v, const std::string& what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return ExpansionPoint::infinity();
        throw ConfigError(what + ": the only string point is \"inf\"");
    }
    return ExpansionPoint::finite(complex_value(v, what));
}

std::vector<ExpansionPoint> point_list(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + ": expected a list");
    std::vector<ExpansionPoint> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(point_value(v[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

bool same_point(const ExpansionPoint& a, const ExpansionPoint& b) {
    if (a.at_infinity || b.at_infinity) return a.at_infinity == b.at_infinity;
    return std::abs(a.a - b.a) < 1e-12 * std::max(1.0, std::abs(a.a));
}

std::string string_value(const json& v, const std::string& what) {
    if (!v.is_string()) throw ConfigError(what + ": expected a string");
    return v.get<std::string>();
}

}  // namespace

WeierstrassData FrontSpec::data() const {
    WeierstrassData d = omega ? make_g_omega(G, *omega, params) : make_gauss_pair(G, *Gstar, params, delta);
    d.basepoint = basepoint;
    d.truncation = truncation;
    return d;
}

FrontSpec parse_front_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: expected an object");
    reject_unknown(doc, kKeys, "config");

    FrontSpec s;
    if (!doc.contains("name")) throw ConfigError("config: missing \"name\"");
    s.name = string_value(doc["name"], "name");
    if (!doc.contains("G")) throw ConfigError("config: missing \"G\"");
    s.G = string_value(doc["G"], "G");
    const bool has_omega = doc.contains("omega"), has_gstar = doc.contains("Gstar");
    if (has_omega == has_gstar) throw ConfigError("config: exactly one of \"omega\" and \"Gstar\" is required");
    if (has_omega) s.omega = string_value(doc["omega"], "omega");
    if (has_gstar) s.Gstar = string_value(doc["Gstar"], "Gstar");

    if (doc.contains("params")) {
        const json& p = doc["params"];
        if (!p.is_object()) throw ConfigError("params: expected an object");
        for (auto it = p.begin(); it != p.end(); ++it) s.params[it.key()] = complex_value(it.value(), "params." + it.key());
    }
    if (doc.contains("delta")) {
        if (has_omega) throw ConfigError("delta: only meaningful with \"Gstar\"");
        s.delta = complex_value(doc["delta"], "delta");
        if (std::abs(s.delta) == 0.0) throw ConfigError("delta: must be nonzero");
    }
    if (!doc.contains("ends")) throw ConfigError("config: missing \"ends\"");
    s.ends = point_list(doc["ends"], "ends");
    if (s.ends.empty()) throw ConfigError("ends: at least one end is required");
    for (std::size_t i = 0; i < s.ends.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (same_point(s.ends[i], s.ends[j]))
                throw ConfigError("ends: entries " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    if (doc.contains("umbilics")) s.umbilics = point_list(doc["umbilics"], "umbilics");
    if (doc.contains("basepoint")) s.basepoint = complex_value(doc["basepoint"], "basepoint");
    if (doc.contains("truncation")) s.truncation = integer(doc["truncation"], "truncation", 4);
    if (doc.contains("covering_sheets")) s.covering_sheets = integer(doc["covering_sheets"], "covering_sheets", 1);

    if (doc.contains("probe")) {
        const json& p = doc["probe"];
        if (!p.is_object()) throw ConfigError("probe: expected an object");
        reject_unknown(p, kProbeKeys, "probe");
        if (p.contains("heights")) {
            if (!p["heights"].is_array()) throw ConfigError("probe.heights: expected a list");
            for (const json& h : p["heights"]) {
                double x = number(h, "probe.heights");
                if (!(x > 0.0)) throw ConfigError("probe.heights: heights must be positive");
                s.probe.heights.push_back(x);
            }
        }
        if (p.contains("samples")) s.probe.samples = integer(p["samples"], "probe.samples", 16);
        if (p.contains("grid")) {
            const json& g = p["grid"];
            if (!g.is_object()) throw ConfigError("probe.grid: expected an object");
            reject_unknown(g, kGridKeys, "probe.grid");
            if (g.contains("r_min")) s.probe.grid.r_min = number(g["r_min"], "probe.grid.r_min");
            if (g.contains("r_max")) s.probe.grid.r_max = number(g["r_max"], "probe.grid.r_max");
            if (g.contains("radial")) s.probe.grid.radial = integer(g["radial"], "probe.grid.radial", 2);
            if (g.contains("angular")) s.probe.grid.angular = integer(g["angular"], "probe.grid.angular", 3);
            if (g.contains("sheets")) s.probe.grid.sheets = integer(g["sheets"], "probe.grid.sheets", 1);
            if (!(s.probe.grid.r_min > 0.0 && s.probe.grid.r_min < s.probe.grid.r_max))
                throw ConfigError("probe.grid: need 0 < r_min < r_max");
        }
    }
    const bool has_grid = doc.contains("probe") && doc.at("probe").contains("grid");
    if (s.covering_sheets && !has_grid) s.probe.grid.sheets = *s.covering_sheets;

    // expressions are checked here so that syntax errors surface as config errors
    try {
        (void)s.data();
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("data: ") + e.what());
    }
    return s;
}

FrontSpec load_front_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_front_spec(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string format_point(const ExpansionPoint& p) {
    if (p.at_infinity) return "inf";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", p.a.real() == 0.0 ? 0.0 : p.a.real(),
                  p.a.imag() == 0.0 ? 0.0 : p.a.imag());
    return buf;
}

}  // namespace flatfront
