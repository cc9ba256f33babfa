#include "flatfront/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "flatfront/parallel.hpp"

namespace flatfront {

MeshModel parse_mesh_model(const std::string& s) {
    if (s == "ball") return MeshModel::Ball;
    if (s == "uhs") return MeshModel::UpperHalfSpace;
    throw std::invalid_argument("mesh model must be \"ball\" or \"uhs\"");
}

namespace {

std::array<double, 3> embed(const Mat2& X, MeshModel model) {
    if (model == MeshModel::Ball) return to_poincare_ball(X);
    UpperHalfSpacePoint p = project_uhs(X);
    return {p.zeta.real(), p.zeta.imag(), p.h};
}

bool finite3(const std::array<double, 3>& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// quads of an nr x nt grid with the angular index wrapped; -1 marks a missing vertex
Mesh grid_mesh(std::vector<std::array<double, 3>> pos, std::vector<bool> sing, std::size_t nr, std::size_t nt) {
    Mesh m;
    std::vector<int> index(pos.size(), -1);
    for (std::size_t k = 0; k < pos.size(); ++k) {
        if (!finite3(pos[k])) continue;
        index[k] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(pos[k]);
        m.singular.push_back(sing[k]);
    }
    if (nt < 3) return m;
    for (std::size_t i = 0; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            std::size_t j1 = (j + 1) % nt;
            std::array<int, 4> q = {index[i * nt + j], index[(i + 1) * nt + j], index[(i + 1) * nt + j1],
                                    index[i * nt + j1]};
            if (std::all_of(q.begin(), q.end(), [](int v) { return v >= 0; })) m.quads.push_back(q);
        }
    return m;
}

}  // namespace

Mesh surface_mesh(const std::vector<SurfaceSample>& samples, const PolarGrid& grid, MeshModel model) {
    const std::size_t nr = static_cast<std::size_t>(grid.radial), nt = static_cast<std::size_t>(grid.angular);
    if (samples.size() != nr * nt) throw std::invalid_argument("sample count does not match the grid");
    std::vector<std::array<double, 3>> pos(samples.size());
    std::vector<bool> sing(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        pos[k] = embed(samples[k].f, model);
        sing[k] = samples[k].singular;
    }
    return grid_mesh(std::move(pos), std::move(sing), nr, nt);
}

Mesh caustic_mesh(const FrontEvaluator& ev, const PolarGrid& grid, MeshModel model) {
    if (grid.radial < 1 || grid.angular < 1 || !(grid.r_min > 0) || grid.r_max < grid.r_min)
        throw FrontError("invalid polar grid");
    const std::size_t nr = static_cast<std::size_t>(grid.radial), nt = static_cast<std::size_t>(grid.angular);
    const double span = 2.0 * std::numbers::pi * std::max(1, grid.sheets);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::array<double, 3>> pos(nr * nt, {nan, nan, nan});
    parallel_for(pos.size(), [&](std::size_t k) {
        std::size_t i = k / nt, j = k % nt;
        double u = nr == 1 ? 0.0 : double(i) / double(nr - 1);
        double r = grid.r_min * std::pow(grid.r_max / grid.r_min, u);
        try {
            pos[k] = embed(caustic_point(ev.at_polar(r, span * double(j) / double(nt))), model);
        } catch (const FrontError&) {
            // umbilic: left out
        }
    });
    std::vector<bool> sing(pos.size(), false);
    return grid_mesh(std::move(pos), std::move(sing), nr, nt);
}

void write_obj(std::ostream& out, const Mesh& mesh, const std::string& title) {
    char buf[128];
    out << "# " << title << "\n";
    out << "# vertices " << mesh.vertices.size() << " faces " << mesh.quads.size() << "\n";
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.10g %.10g %.10g\n", v[0], v[1], v[2]);
        out << buf;
    }
    auto face = [&](const std::array<int, 4>& q) {
        out << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << "\n";
    };
    auto touches = [&](const std::array<int, 4>& q) {
        return std::any_of(q.begin(), q.end(), [&](int v) { return mesh.singular[static_cast<std::size_t>(v)]; });
    };
    out << "g regular\n";
    for (const auto& q : mesh.quads)
        if (!touches(q)) face(q);
    out << "g singular\n";
    for (const auto& q : mesh.quads)
        if (touches(q)) face(q);
}

std::string format_real(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char c : f) {
            if (c == '"') out << '"';
            out << c;
        }
        out << '"';
    }
    out << "\r\n";
}

void write_svg(std::ostream& out, const std::vector<std::vector<cplx>>& curves, bool closed, double size) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& c : curves)
        for (cplx z : c) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
            x0 = std::min(x0, z.real());
            x1 = std::max(x1, z.real());
            y0 = std::min(y0, z.imag());
            y1 = std::max(y1, z.imag());
        }
    if (x0 > x1) x0 = y0 = -1.0, x1 = y1 = 1.0;
    const double span = std::max({x1 - x0, y1 - y0, 1e-300});
    const double margin = 0.05 * size, scale = (size - 2 * margin) / span;
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    char buf[96];
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%g\" height=\"%g\"",
                  size, size);
    out << buf;
    std::snprintf(buf, sizeof buf, " viewBox=\"0 0 %g %g\">\n", size, size);
    out << buf;
    const double width = std::max(0.5, size / 512.0);
    for (const auto& c : curves) {
        out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << width
            << "\" points=\"";
        bool first = true;
        for (cplx z : c) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
            double x = 0.5 * size + scale * (z.real() - cx);
            double y = 0.5 * size - scale * (z.imag() - cy);
            std::snprintf(buf, sizeof buf, "%s%.4f,%.4f", first ? "" : " ", x, y);
            out << buf;
            first = false;
        }
        if (closed && !c.empty() && std::isfinite(c.front().real()) && std::isfinite(c.front().imag())) {
            std::snprintf(buf, sizeof buf, " %.4f,%.4f", 0.5 * size + scale * (c.front().real() - cx),
                          0.5 * size - scale * (c.front().imag() - cy));
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace flatfront
