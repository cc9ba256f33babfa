#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "flatfront/front.hpp"

namespace flatfront {

enum class MeshModel { Ball, UpperHalfSpace };
MeshModel parse_mesh_model(const std::string& s);  // "ball" | "uhs"

struct Mesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<bool> singular;             // per vertex, |rho| near 1
    std::vector<std::array<int, 4>> quads;  // 0-based vertex indices
};

/// Quads over the polar grid, closed up in the angular direction.
Mesh surface_mesh(const std::vector<SurfaceSample>& samples, const PolarGrid& grid, MeshModel model);
/// Same grid for the caustic; umbilic points are dropped with their quads.
Mesh caustic_mesh(const FrontEvaluator& ev, const PolarGrid& grid, MeshModel model);

/// ASCII OBJ; faces touching the singular set go in group "singular".
void write_obj(std::ostream& out, const Mesh& mesh, const std::string& title);

/// One RFC 4180 record, CRLF terminated.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
/// Round-trippable decimal.
std::string format_real(double x);

/// SVG 1.1 document with one polyline per curve, y pointing up.
void write_svg(std::ostream& out, const std::vector<std::vector<cplx>>& curves, bool closed = true,
               double size = 512.0);

}  // namespace flatfront
