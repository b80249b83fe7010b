#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsplate/evolution.hpp"
#include "tsplate/moments.hpp"

namespace tsplate {

//! Point fields as CSV, one row per quadrature point in solver order:
//! point, x1, x2, x3, y1, y2, weight, then the columns of values (row p = point p).
//! Points of the 3D model carry y = (0, 0).
void write_point_csv(std::ostream& os, const std::vector<ProductPoint>& points,
                     const std::vector<std::string>& names, const Eigen::MatrixXd& values);

//! Evolution trace: t, Q, H_inc, D_cum, W_cum, balance_residual, stability_residual,
//! equilibrium_residual, iterations, amplitude, restarts, converged. Row 0 is the initial state.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);

//! Named scalar arrays on an nx x ny x nz lattice, x fastest.
struct LatticeData {
    int nx = 1, ny = 1, nz = 1;
    double origin[3] = {0, 0, 0};
    double spacing[3] = {1, 1, 1};
    std::vector<std::string> names;
    std::vector<std::vector<double>> arrays;
};

//! Legacy ASCII VTK STRUCTURED_POINTS with one POINT_DATA scalar per array.
void write_vtk(std::ostream& os, const LatticeData& data, const std::string& title);

//! Stacks point fields into the value matrix of write_point_csv.
template <int D>
Eigen::MatrixXd stack_fields(const std::vector<std::vector<Eigen::Matrix<double, D, 1>>>& fields) {
    const size_t n = fields.empty() ? 0 : fields.front().size();
    Eigen::MatrixXd m(n, D * fields.size());
    for (size_t f = 0; f < fields.size(); ++f)
        for (size_t p = 0; p < n; ++p) m.block(p, f * D, 1, D) = fields[f][p].transpose();
    return m;
}

}  // namespace tsplate
