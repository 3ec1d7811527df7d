#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dfh/coupled_solver.hpp"
#include "dfh/mesh.hpp"
#include "dfh/vtk.hpp"

namespace dfh {

/// Mesh plus discrete solution and indicators of one adaptive round.
struct Snapshot {
    int iter{0};
    double p{1.0};
    Mesh mesh;
    std::vector<double> velocity;
    std::vector<double> pressure;
    std::vector<double> temperature;
    std::vector<double> indicator_heat;
    std::vector<double> indicator_darcy;

    VtkFields vtk_fields() const;
};

Snapshot make_snapshot(int iter, double p, const Mesh& mesh, const CoupledState& state,
                       const std::vector<double>& heat, const std::vector<double>& darcy);

void write_snapshot(std::ostream& out, const Snapshot& s);
Snapshot read_snapshot(std::istream& in);
void write_snapshot_file(const std::string& path, const Snapshot& s);
Snapshot read_snapshot_file(const std::string& path);

}  // namespace dfh
