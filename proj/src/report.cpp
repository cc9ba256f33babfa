#include "flatfront/report.hpp"

#include <cmath>

namespace flatfront {

Json real_json(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x == 0.0 ? 0.0 : x;  // no "-0.0"
}

Json complex_json(cplx z) { return Json::array({real_json(z.real()), real_json(z.imag())}); }

Json rational_json(const Rational& q) { return to_string(q); }

Json order_json(const Order& o) { return o.infinite ? Json("inf") : rational_json(o.value); }

Json point_json(const ExpansionPoint& p) { return p.at_infinity ? Json("inf") : complex_json(p.a); }

Json boundary_json(const BoundaryPoint& b) { return b.infinite ? Json("inf") : complex_json(b.value); }

Json matrix_json(const Mat2& m) {
    return Json::array({Json::array({complex_json(m.a), complex_json(m.b)}),
                        Json::array({complex_json(m.c), complex_json(m.d)})});
}

namespace {

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json normalized_json(const NormalizedOmega& n) {
    return {{"far", boundary_json(n.far)},   {"k", complex_json(n.k)},         {"l", n.l},
            {"mu", rational_json(n.mu)},     {"c0", complex_json(n.c0)},       {"b0", complex_json(n.b0)},
            {"b", real_json(n.b)},           {"lambda", real_json(n.lambda)},  {"tail_arg", real_json(n.tail_arg)}};
}

Json indentation_json(const IndentationReport& r) {
    Json tested = Json::array();
    for (const auto& t : r.tested)
        tested.push_back({{"far", boundary_json(t.far)},
                          {"far_original", boundary_json(t.far_original)},
                          {"l", t.l ? Json(*t.l) : Json("inf")}});
    Json axis = nullptr;
    if (r.principal_axis) axis = Json::array({boundary_json((*r.principal_axis)[0]), boundary_json((*r.principal_axis)[1])});
    return {{"centered", r.centered},
            {"rotational", r.rotational},
            {"n", r.n ? Json(*r.n) : Json("inf")},
            {"principal_axis", axis},
            {"tested", tested}};
}

}  // namespace

Json profile_json(const AsymptoticProfile& a) {
    return {{"kind", to_string(a.kind)},      {"branch", to_string(a.branch)}, {"p", real_json(a.p)},
            {"m", a.m},                       {"n", optional_int(a.n)},        {"b", real_json(a.b)},
            {"lambda", real_json(a.lambda)},  {"beta", real_json(a.beta)}};
}

Json end_report_json(const EndReport& r) {
    Json j = {{"at", point_json(r.at)},
              {"type", to_string(r.type)},
              {"p", rational_json(r.p)},
              {"mu", rational_json(r.mu)},
              {"mu_star", order_json(r.mu_star)},
              {"ord_Q", order_json(r.ord_Q)},
              {"m", r.m},
              {"m1", r.m1},
              {"m2", r.m2},
              {"alpha", rational_json(r.alpha)},
              {"alpha_numeric", real_json(r.alpha_numeric)},
              {"q_minus2", real_json(r.q_minus2)},
              {"n", optional_int(r.n)},
              {"lambda", real_json(r.lambda)},
              {"complete", r.complete},
              {"dominant", to_string(r.dominant)},
              {"limit", boundary_json(r.limit)},
              {"rho0_abs", real_json(r.rho0_abs)},
              {"indentation", indentation_json(r.indentation)},
              {"normalized", r.normalized ? normalized_json(*r.normalized) : Json(nullptr)}};
    if (r.type != EndType::GeodesicDegenerate) {
        try {
            j["profile"] = profile_json(asymptotic_profile(r, r.normalized));
        } catch (const std::exception& e) {
            j["profile"] = {{"error", e.what()}};
        }
    } else {
        j["profile"] = nullptr;
    }
    return j;
}

Json flux_report_json(const FluxReport& f) {
    Json vecs = Json::array();
    for (const auto& v : f.eigenvectors) vecs.push_back(Json::array({complex_json(v[0]), complex_json(v[1])}));
    Json axis = nullptr;
    if (f.axis) axis = Json::array({boundary_json((*f.axis)[0]), boundary_json((*f.axis)[1])});
    return {{"Phi", matrix_json(f.Phi)},
            {"symbolic", matrix_json(f.symbolic)},
            {"numeric", matrix_json(f.numeric)},
            {"route", f.route == FluxRoute::Symbolic ? "symbolic" : "numeric"},
            {"route_gap", real_json(f.route_gap)},
            {"nodes", f.nodes},
            {"radius", real_json(f.radius)},
            {"eigenvalues", Json::array({complex_json(f.eigenvalues[0]), complex_json(f.eigenvalues[1])})},
            {"eigenvectors", vecs},
            {"nilpotent", f.nilpotent},
            {"axis", axis}};
}

Json balancing_json(const BalancingResult& b) {
    Json fl = Json::array();
    for (const Mat2& m : b.fluxes) fl.push_back(matrix_json(m));
    return {{"fluxes", fl}, {"sum", matrix_json(b.sum)}, {"max_norm", real_json(b.max_norm)}};
}

Json caustic_json(const CausticData& c) {
    return {{"kind", to_string(c.kind)},
            {"cover", c.cover},
            {"co_orientable", c.co_orientable},
            {"ord_Q", rational_json(c.ord_Q)},
            {"ord_S", rational_json(c.ord_S)},
            {"S_vanishes", c.S_vanishes},
            {"Qc_residual", real_json(c.Qc_residual)},
            {"dlog_residual", real_json(c.dlog_residual)},
            {"pitch",
             {{"m_c", rational_json(c.pitch.m_c)},
              {"n_c", rational_json(c.pitch.n_c)},
              {"p", rational_json(c.pitch.p_c)},
              {"complete", c.pitch.complete}}}};
}

Json descriptor_json(const CycloidDescriptor& d) {
    return {{"m", d.m},
            {"n", d.n},
            {"d", d.d},
            {"m0", rational_json(d.m0)},
            {"n0", rational_json(d.n0)},
            {"kind", to_string(d.kind)},
            {"cusps", d.cusps},
            {"winding", rational_json(d.winding)},
            {"simple", d.simple}};
}

Json ode_check_json(const CycloidOdeCheck& c) {
    return {{"u_residual", real_json(c.u_residual)},     {"ode_residual", real_json(c.ode_residual)},
            {"r2_residual", real_json(c.r2_residual)},   {"C2", real_json(c.C2)},
            {"C", complex_json(c.C)},                    {"gamma_residual", real_json(c.gamma_residual)}};
}

Json pitch_json(const PitchEstimate& p) {
    Json hs = Json::array(), sc = Json::array();
    for (double h : p.heights) hs.push_back(real_json(h));
    for (double s : p.scales) sc.push_back(real_json(s));
    return {{"p_hat", real_json(p.p_hat)},
            {"stderr", real_json(p.stderr_)},
            {"heights", hs},
            {"scales", sc},
            {"residual", real_json(p.residual)},
            {"warning", p.warning ? Json(*p.warning) : Json(nullptr)}};
}

Json profile_report_json(const ProfileReport& p) {
    Json per = Json::array();
    for (const auto& r : p.per_height)
        per.push_back({{"h", real_json(r.h)},
                       {"residual", real_json(r.residual)},
                       {"scale_ratio", real_json(r.scale_ratio)},
                       {"rotation", real_json(r.rotation)},
                       {"hausdorff", r.hausdorff ? real_json(*r.hausdorff) : Json(nullptr)}});
    return {{"per_height", per},
            {"decreasing", p.decreasing},
            {"basepoint_hint", p.basepoint_hint ? real_json(*p.basepoint_hint) : Json(nullptr)},
            {"note", p.note}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace flatfront
