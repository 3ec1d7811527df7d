#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfh/mesh.hpp"

namespace dfh {

/// Nodal and cellwise fields written alongside the mesh. Empty vectors are
/// skipped on output.
struct VtkFields {
    std::vector<double> temperature;  // per vertex
    std::vector<double> pressure;     // per vertex
    std::vector<double> velocity;     // interleaved (ux, uy) per element
    std::vector<double> indicator_total;
    std::vector<double> indicator_heat;
    std::vector<double> indicator_darcy;
};

/// Legacy ASCII VTK unstructured grid (triangles, z = 0).
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields);
void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields);

struct VtkData {
    std::vector<Point> points;
    std::vector<std::array<Index, 3>> cells;
    VtkFields fields;
};

/// Reads back files produced by write_vtk (not a general VTK reader).
VtkData read_vtk(std::istream& in);
VtkData read_vtk_file(const std::string& path);

}  // namespace dfh
