// flatfront: command-line front end for the end, flux, caustic, slice and cycloid probes.
//
// Exit codes: 0 ok, 1 configuration or usage error, 2 numeric failure, 3 acceptance failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "flatfront/acceptance.hpp"
#include "flatfront/config.hpp"
#include "flatfront/export.hpp"
#include "flatfront/report.hpp"

using namespace flatfront;

namespace {

constexpr int kConfigError = 1, kNumericError = 2, kAcceptanceError = 3;

struct AcceptanceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// writes to path, or to stdout for "" and "-"
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

const ExpansionPoint& pick_end(const FrontSpec& s, int index) {
    if (index < 0 || index >= static_cast<int>(s.ends.size()))
        throw ConfigError("--end " + std::to_string(index) + " out of range (" + std::to_string(s.ends.size()) +
                          " ends)");
    return s.ends[static_cast<std::size_t>(index)];
}

PolarGrid grid_for(const FrontSpec& s, const FrontEvaluator& ev) {
    PolarGrid g = s.probe.grid;
    if (!s.covering_sheets) g.sheets = std::max(g.sheets, ev.covering_sheets());
    return g;
}

Json header(const FrontSpec& s) {
    return {{"name", s.name}, {"G", s.G}, {"omega", s.omega ? Json(*s.omega) : Json(nullptr)},
            {"Gstar", s.Gstar ? Json(*s.Gstar) : Json(nullptr)}, {"truncation", s.truncation}};
}

// ---- subcommands ----

struct Common {
    std::string config, out;
};

void cmd_classify(const Common& c, std::optional<int> end) {
    FrontSpec s = load_front_spec(c.config);
    if (end) (void)pick_end(s, *end);
    WeierstrassData d = s.data();
    Json ends = Json::array();
    for (std::size_t i = 0; i < s.ends.size(); ++i) {
        if (end && static_cast<int>(i) != *end) continue;
        ends.push_back(end_report_json(classify_end(d, s.ends[i])));
    }
    Json j = header(s);
    j["ends"] = ends;
    emit(c.out, dump(j));
}

void cmd_flux(const Common& c, double radius) {
    FrontSpec s = load_front_spec(c.config);
    WeierstrassData d = s.data();
    Json ends = Json::array();
    std::vector<double> radii;
    for (const auto& at : s.ends) {
        FluxReport f = flux_matrix(d, at, radius);
        radii.push_back(f.radius);
        ends.push_back({{"at", point_json(at)}, {"flux", flux_report_json(f)}});
    }
    Json j = header(s);
    j["ends"] = ends;
    j["balancing"] = balancing_json(balancing_check(d, s.ends, radii));
    emit(c.out, dump(j));
}

void cmd_mesh(const Common& c, int end, const std::string& model_name, double parallel_t) {
    FrontSpec s = load_front_spec(c.config);
    MeshModel model = parse_mesh_model(model_name);
    WeierstrassData d = s.data();
    const ExpansionPoint& at = pick_end(s, end);
    FrontEvaluator ev(d, build_lift(d, at), parallel_t);
    PolarGrid g = grid_for(s, ev);
    Mesh m = surface_mesh(sample_surface(ev, g), g, model);
    std::ostringstream os;
    write_obj(os, m, s.name + " end " + format_point(at) + (model == MeshModel::Ball ? " ball" : " uhs"));
    emit(c.out, os.str());
}

void cmd_slice(const Common& c, int end, std::vector<double> heights, int samples, const std::string& csv_path) {
    FrontSpec s = load_front_spec(c.config);
    if (heights.empty()) heights = s.probe.heights;
    if (heights.empty()) throw ConfigError("no slice heights: pass --heights or set probe.heights");
    for (double h : heights)
        if (!(h > 0.0)) throw ConfigError("slice heights must be positive");
    WeierstrassData d = s.data();
    const ExpansionPoint& at = pick_end(s, end);
    FrontEvaluator ev(d, build_lift(d, at));
    EndReport rep = classify_end(ev.canonical(), at);
    SliceFrame frame = slice_frame(ev, rep);
    SliceSettings set;
    set.samples_per_sheet = samples > 0 ? samples : s.probe.samples;
    std::vector<SliceCurve> sl = slice_family(ev, frame, heights, set);

    Json j = header(s);
    j["end"] = point_json(at);
    j["type"] = to_string(rep.type);
    j["p"] = rational_json(rep.p);
    Json curves = Json::array();
    for (const auto& cv : sl)
        curves.push_back({{"h", real_json(cv.h)}, {"sheets", cv.sheets}, {"samples", cv.zeta_over_h.size()},
                          {"h_spread", real_json(cv.h_spread)}});
    j["slices"] = curves;
    try {
        std::optional<std::pair<int, int>> mn;
        if (!rep.complete && rep.n) mn = std::pair{rep.m, *rep.n};
        j["pitch"] = pitch_json(estimate_pitch(sl, mn));
    } catch (const SliceError& e) {
        j["pitch"] = {{"error", e.what()}};
    }
    AsymptoticProfile prof = asymptotic_profile(rep, rep.normalized);
    j["profile_model"] = profile_json(prof);
    j["profile"] = profile_report_json(fit_profile(sl, prof));
    if (!rep.complete && rep.n) {
        Json fits = Json::array();
        for (const auto& cv : sl) {
            CycloidSliceFit f = fit_cycloid_slice(cv, rep.m, *rep.n);
            fits.push_back({{"h", real_json(f.h)}, {"C", complex_json(f.fit.C)}, {"tau", real_json(f.fit.tau)},
                            {"residual", real_json(f.fit.residual)}, {"hausdorff", real_json(f.hausdorff)},
                            {"diameter", real_json(f.diameter)}, {"cusps", f.cusps}});
        }
        j["cycloid"] = fits;
    } else {
        j["cycloid"] = nullptr;
    }
    if (!csv_path.empty()) {
        std::ostringstream os;
        write_csv_row(os, {"h", "t", "Re(zeta/h)", "Im(zeta/h)"});
        for (const auto& cv : sl)
            for (std::size_t k = 0; k < cv.t.size(); ++k)
                write_csv_row(os, {format_real(cv.h), format_real(cv.t[k]), format_real(cv.zeta_over_h[k].real()),
                                   format_real(cv.zeta_over_h[k].imag())});
        emit(csv_path, os.str());
    }
    emit(c.out, dump(j));
}

void cmd_caustic(const Common& c, const std::string& mesh_path, int mesh_end, const std::string& model_name) {
    FrontSpec s = load_front_spec(c.config);
    WeierstrassData d = s.data();
    Json points = Json::array();
    auto add = [&](const ExpansionPoint& at, const char* role) {
        Json e = {{"at", point_json(at)}, {"role", role}};
        CausticData cd = analyze_caustic(d, at);
        e["caustic"] = caustic_json(cd);
        try {
            EndReport r = classify_caustic(cd);
            e["end"] = end_report_json(r);
            e["p"] = rational_json(r.p);
        } catch (const std::exception& ex) {
            e["end"] = {{"error", ex.what()}};
            e["p"] = rational_json(cd.pitch.p_c);
        }
        points.push_back(e);
    };
    for (const auto& at : s.ends) add(at, "end");
    for (const auto& at : s.umbilics) add(at, "umbilic");
    Json j = header(s);
    j["points"] = points;
    if (!mesh_path.empty()) {
        MeshModel model = parse_mesh_model(model_name);
        const ExpansionPoint& at = pick_end(s, mesh_end);
        FrontEvaluator ev(d, build_lift(d, at));
        std::ostringstream os;
        write_obj(os, caustic_mesh(ev, grid_for(s, ev), model), s.name + " caustic near end " + format_point(at));
        emit(mesh_path, os.str());
    }
    emit(c.out, dump(j));
}

void cmd_cycloid(const std::string& out, int m, int n, int samples, const std::string& csv_path,
                 const std::string& svg_path, bool ode) {
    if (m <= 0 || n <= 0 || m == n) throw ConfigError("need positive --m and --n with m != n");
    if (samples < 16) throw ConfigError("--samples must be at least 16");
    CycloidDescriptor desc = descriptor(m, n);
    // offset nodes keep samples off the cusps
    std::vector<cplx> z;
    std::vector<double> t;
    for (int k = 0; k < samples; ++k) {
        t.push_back(2 * std::numbers::pi * (k + 0.31) / samples);
        z.push_back(gamma(m, n, t.back()));
    }
    Json j = {{"descriptor", descriptor_json(desc)}};
    Json measured = {{"cusps", count_cusps(z)}, {"diameter", real_json(diameter(z))}};
    try {
        // [0, 2 pi) covers the image d times
        Rational w = normal_winding(z);
        measured["winding"] = rational_json(w);
        measured["winding_per_traversal"] = rational_json(w / Rational(desc.d));
    } catch (const CycloidError& e) {
        measured["winding"] = {{"error", e.what()}};
    }
    j["measured"] = measured;
    bool ode_pass = true;
    if (ode) {
        CycloidOdeCheck chk = check_ode_solution(m, n, ode_solve(m, n));
        ode_pass = chk.gamma_residual < 1e-6 && chk.u_residual < 1e-8 && chk.r2_residual < 1e-8;
        Json o = ode_check_json(chk);
        o["pass"] = ode_pass;
        j["ode"] = o;
        std::cerr << (ode_pass ? "PASS" : "FAIL") << " cycloid ODE (" << m << "," << n
                  << "): Gamma residual " << chk.gamma_residual << ", u residual " << chk.u_residual
                  << ", r^2 residual " << chk.r2_residual << "\n";
    } else {
        j["ode"] = nullptr;
    }
    if (!csv_path.empty()) {
        std::ostringstream os;
        write_csv_row(os, {"t", "Re", "Im"});
        for (std::size_t k = 0; k < z.size(); ++k)
            write_csv_row(os, {format_real(t[k]), format_real(z[k].real()), format_real(z[k].imag())});
        emit(csv_path, os.str());
    }
    if (!svg_path.empty()) {
        std::ostringstream os;
        write_svg(os, {z});
        emit(svg_path, os.str());
    }
    emit(out, dump(j));
    if (!ode_pass) throw AcceptanceFailure("cycloid ODE check failed");
}

void cmd_verify(const std::string& out, const std::string& data_dir, const std::vector<int>& only) {
    auto results = run_acceptance(data_dir, only);
    bool all = true;
    Json arr = Json::array();
    for (const auto& r : results) {
        std::cout << format_result(r) << "\n";
        all = all && r.pass;
        arr.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (!out.empty()) emit(out, dump({{"criteria", arr}, {"pass", all}}));
    if (!all) throw AcceptanceFailure("acceptance criteria failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flat fronts in hyperbolic space: ends, flux, caustics, slices, cycloids"};
    app.require_subcommand(1);

    Common common;
    std::optional<int> classify_end_index;
    int end = 0, samples = 0, cyc_m = 1, cyc_n = 2, cyc_samples = 4096, mesh_end = 0;
    double radius = -1.0, parallel_t = 0.0;
    std::string model = "ball", csv, svg, caustic_mesh_path, data_dir = default_data_dir();
    std::vector<double> heights;
    std::vector<int> only;
    bool ode = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", common.config, "front spec (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output", common.out, "report path (default: stdout)");
    };

    auto* classify = app.add_subcommand("classify", "EndReport for every end");
    add_common(classify);
    classify->add_option("--end", classify_end_index, "only this end (index into ends)");

    auto* flux = app.add_subcommand("flux", "flux matrices and the balancing sum");
    add_common(flux);
    flux->add_option("--radius", radius, "contour radius in each end chart (default: automatic)");

    auto* mesh = app.add_subcommand("mesh", "OBJ mesh of a neighbourhood of an end");
    add_common(mesh);
    mesh->add_option("--end", end, "end index");
    mesh->add_option("--model", model, "ball or uhs")->check(CLI::IsMember({"ball", "uhs"}));
    mesh->add_option("--parallel", parallel_t, "parallel front distance t");

    auto* sl = app.add_subcommand("slice", "horosphere slices at an end");
    add_common(sl);
    sl->add_option("--end", end, "end index");
    sl->add_option("--heights", heights, "slice heights (default: probe.heights)");
    sl->add_option("--samples", samples, "angular samples per sheet (default: probe.samples)");
    sl->add_option("--csv", csv, "slice points as CSV");

    auto* caustic = app.add_subcommand("caustic", "caustic forms and pitch at ends and umbilics");
    add_common(caustic);
    caustic->add_option("--mesh", caustic_mesh_path, "also write a caustic OBJ mesh");
    caustic->add_option("--mesh-end", mesh_end, "end used for the caustic mesh");
    caustic->add_option("--model", model, "ball or uhs")->check(CLI::IsMember({"ball", "uhs"}));

    auto* cycloid = app.add_subcommand("cycloid", "Gamma_{m,n}: descriptor, curve, ODE check");
    cycloid->add_option("--m", cyc_m, "m")->required();
    cycloid->add_option("--n", cyc_n, "n")->required();
    cycloid->add_option("--samples", cyc_samples, "curve samples");
    cycloid->add_option("--csv", csv, "curve as CSV");
    cycloid->add_option("--svg", svg, "curve as SVG");
    cycloid->add_flag("--ode", ode, "integrate the ODE and compare with the closed form");
    cycloid->add_option("-o,--output", common.out, "report path (default: stdout)");

    auto* verify = app.add_subcommand("verify", "acceptance suite on the bundled examples");
    verify->add_option("--data", data_dir, "example directory")->check(CLI::ExistingDirectory);
    verify->add_option("--only", only, "criterion ids");
    verify->add_option("-o,--output", common.out, "JSON summary path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*classify) cmd_classify(common, classify_end_index);
        else if (*flux) cmd_flux(common, radius);
        else if (*mesh) cmd_mesh(common, end, model, parallel_t);
        else if (*sl) cmd_slice(common, end, heights, samples, csv);
        else if (*caustic) cmd_caustic(common, caustic_mesh_path, mesh_end, model);
        else if (*cycloid) cmd_cycloid(common.out, cyc_m, cyc_n, cyc_samples, csv, svg, ode);
        else if (*verify) cmd_verify(common.out, data_dir, only);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kConfigError;
    } catch (const AcceptanceFailure& e) {
        std::cerr << e.what() << "\n";
        return kAcceptanceError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumericError;
    }
    return 0;
}
