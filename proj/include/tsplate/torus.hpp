#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "tsplate/material.hpp"

namespace tsplate {

//! Rasterized phase map on the unit cell Y = [0,1)^2.
//! Cell (i, j) covers [i/N, (i+1)/N) x [j/N, (j+1)/N) and is stored at raster[j*N + i].
class TorusGeometry {
public:
    TorusGeometry() = default;
    //! Throws std::invalid_argument on inconsistent sizes or unknown phase ids.
    TorusGeometry(int resolution, std::vector<int> raster, std::vector<MaterialPhase> phases);

    static TorusGeometry from_json(const nlohmann::json& j);
    static TorusGeometry load(const std::string& path);
    nlohmann::json to_json() const;

    //! Single-phase torus with the given resolution.
    static TorusGeometry homogeneous(const MaterialPhase& phase, int resolution = 1);

    int resolution() const { return n_; }
    int cell_count() const { return n_ * n_; }
    int phase_count() const { return static_cast<int>(phases_.size()); }
    const MaterialPhase& phase(int id) const { return phases_.at(id); }
    const std::vector<MaterialPhase>& phases() const { return phases_; }

    //! Periodic wrap of integer cell coordinates.
    int cell(int i, int j) const;
    //! Cell containing y, with y taken modulo 1.
    int cell_at(const Vec2& y) const;
    int phase_of_cell(int c) const { return raster_[c]; }
    bool is_interface(int c) const { return interface_[c]; }
    //! Phases meeting at cell c: its own phase and those of its 4 neighbours.
    const std::vector<int>& adjacent_phases(int c) const { return adjacent_[c]; }
    //! Phase whose yield set governs dissipation in cell c (the smallest adjacent set).
    int yield_phase(int c) const { return yield_phase_[c]; }

    double area_fraction(int phase_id) const;

private:
    int n_ = 0;
    std::vector<int> raster_;
    std::vector<MaterialPhase> phases_;
    std::vector<bool> interface_;
    std::vector<std::vector<int>> adjacent_;
    std::vector<int> yield_phase_;
};

//! H(y, xi): own phase inside, min over adjacent phases on interface cells.
//! Throws if xi is not deviatoric.
double dissipation_density(const TorusGeometry& g, const Vec2& y, const Sym3& xi);

struct OrderingReport {
    bool ok = true;
    std::vector<std::pair<int, int>> violations;
    std::string message() const;
};

//! Checks that the yield sets of every pair of phases sharing an edge are nested.
OrderingReport check_phase_ordering(const TorusGeometry& g);

}  // namespace tsplate
