#include "tsplate/field_io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tsplate {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_point_csv(std::ostream& os, const std::vector<ProductPoint>& points, const std::vector<std::string>& names,
                     const Eigen::MatrixXd& values) {
    if (values.rows() != static_cast<Eigen::Index>(points.size()) || values.cols() != static_cast<Eigen::Index>(names.size()))
        throw std::invalid_argument("point csv: shape mismatch");
    os << "point,x1,x2,x3,y1,y2,weight";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (size_t p = 0; p < points.size(); ++p) {
        const auto& q = points[p];
        os << p << ',' << num(q.x[0]) << ',' << num(q.x[1]) << ',' << num(q.x3) << ',' << num(q.y[0]) << ','
           << num(q.y[1]) << ',' << num(q.weight);
        for (Eigen::Index c = 0; c < values.cols(); ++c) os << ',' << num(values(p, c));
        os << '\n';
    }
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
    os << "t,Q,H_inc,D_cum,W_cum,balance_residual,stability_residual,equilibrium_residual,iterations,amplitude,"
          "restarts,converged\n";
    for (const auto& r : trace.rows)
        os << num(r.t) << ',' << num(r.Q) << ',' << num(r.H_inc) << ',' << num(r.D_cum) << ',' << num(r.W_cum) << ','
           << num(r.balance) << ',' << num(r.stability) << ',' << num(r.equilibrium) << ',' << r.iterations << ','
           << num(r.amplitude) << ',' << r.restarts << ',' << (r.converged ? 1 : 0) << '\n';
}

void write_vtk(std::ostream& os, const LatticeData& d, const std::string& title) {
    const size_t n = static_cast<size_t>(d.nx) * d.ny * d.nz;
    if (d.names.size() != d.arrays.size()) throw std::invalid_argument("vtk: names and arrays differ in number");
    for (const auto& a : d.arrays)
        if (a.size() != n) throw std::invalid_argument("vtk: array size does not match the lattice");
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << d.nx << ' ' << d.ny << ' ' << d.nz << '\n';
    os << "ORIGIN " << num(d.origin[0]) << ' ' << num(d.origin[1]) << ' ' << num(d.origin[2]) << '\n';
    os << "SPACING " << num(d.spacing[0]) << ' ' << num(d.spacing[1]) << ' ' << num(d.spacing[2]) << '\n';
    os << "POINT_DATA " << n << '\n';
    for (size_t k = 0; k < d.names.size(); ++k) {
        os << "SCALARS " << d.names[k] << " double 1\nLOOKUP_TABLE default\n";
        for (double v : d.arrays[k]) os << num(v) << '\n';
    }
}

}  // namespace tsplate
