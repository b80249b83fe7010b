#pragma once

#include <cstdint>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsplate/evolution.hpp"
#include "tsplate/kl_state.hpp"
#include "tsplate/limit_models.hpp"
#include "tsplate/torus.hpp"

namespace tsplate {

//! Malformed or inconsistent scenario configuration.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelKind { Gamma0, GammaInf, Plate3D };

std::string model_name(ModelKind k);

//! Settings of the rescaled 3D model. eps <= 0 selects the schedule of `regime`: sqrt(h) for
//! gamma = 0, h^2 for gamma = infinity, snapped so that a/eps is an integer.
struct Plate3DConfig {
    double h = 0.1;
    double eps = 0;
    Regime regime = Regime::Gamma0;
    int layers = 2;
    int cells_per_period[2] = {4, 4};
    int cells_x2 = 0;  // fixed cell count along x2 (for y2-invariant geometries), 0 = periodic count
    bool assumed_shear = true;
};

struct Scenario {
    std::string name;
    ModelKind model = ModelKind::Gamma0;
    TorusGeometry geometry;
    MacroGrid plate;           // limit models: the macro grid; 3D: the extents a, b
    int transverse_points = 3;
    Plate3DConfig plate3d;
    BoundaryDatum load;
    bool amplitude_in_first_yield = false;  // program amplitudes in units of the first-yield amplitude
    std::vector<double> times;
    SolverOptions solver;
    std::uint64_t seed = 1;
    int stress_samples = 20;
    int sample_every = 0;      // slack sampling every k-th step; 0 = final step only
    bool vtk = false;
};

//! Parses a scenario; relative geometry paths resolve against base_dir. Throws SchemaError.
Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

double default_eps(Regime regime, double h);
//! a / max(1, round(a / eps)): the period nearest to eps with a whole number of periods across a.
double aligned_eps(double a, double eps);
//! Plane grid of the 3D model for period eps: cells_per_period cells per period.
MacroGrid plane_grid_3d(const Scenario& s, double eps);

struct RunResult {
    EvolutionTrace trace;
    nlohmann::json report;
    bool converged = true;
    //! 0 when every step converged, 3 otherwise.
    int exit_code() const { return converged ? 0 : 3; }
};

//! Runs the scenario's evolution with per-step verification. Writes trace.csv, report.json,
//! state.json, fields.csv (and displacement.vtk) into out_dir unless it is empty.
RunResult run_scenario(const Scenario& s, const std::string& out_dir);

//! Re-checks a saved state: kinematic and stress admissibility and plastic-work slack.
nlohmann::json verify_state(const Scenario& s, const nlohmann::json& state);

struct SweepRow {
    double h = 0, eps = 0;
    int n1 = 0, n2 = 0;
    double error = 0, relative_error = 0;
    double Q_h = 0, Q_hom = 0, energy_gap = 0;
    bool converged = false;
    std::string status = "ok";
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double limit_norm = 0;
    bool error_decreasing = false;
    bool gap_decreasing = false;
    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};

//! Limit solution of the scenario's regime, then the 3D model at every h with eps_h from the
//! schedule. Rows fail individually; out_dir receives sweep.csv and sweep.json when given.
SweepTable h_sweep(const Scenario& s, const std::vector<double>& hs, const std::string& out_dir);

//! C_r, boundary points of K_r and a table of H_r for one phase.
nlohmann::json reduce_material(const MaterialPhase& phase, int boundary_samples = 16);

}  // namespace tsplate
