#include "tsplate/torus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tsplate {

TorusGeometry::TorusGeometry(int resolution, std::vector<int> raster, std::vector<MaterialPhase> phases)
    : n_(resolution), raster_(std::move(raster)), phases_(std::move(phases)) {
    if (n_ < 1) throw std::invalid_argument("torus resolution must be at least 1");
    if (static_cast<int>(raster_.size()) != n_ * n_)
        throw std::invalid_argument("raster has " + std::to_string(raster_.size()) + " entries, expected " +
                                    std::to_string(n_ * n_));
    if (phases_.empty()) throw std::invalid_argument("torus needs at least one phase");
    for (int id : raster_)
        if (id < 0 || id >= phase_count())
            throw std::invalid_argument("raster references unknown phase id " + std::to_string(id));
    for (const auto& p : phases_) p.validate();

    interface_.assign(raster_.size(), false);
    adjacent_.resize(raster_.size());
    yield_phase_.resize(raster_.size());
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) {
            const int c = cell(i, j);
            std::set<int> ids{raster_[c]};
            for (int nb : {cell(i + 1, j), cell(i - 1, j), cell(i, j + 1), cell(i, j - 1)}) ids.insert(raster_[nb]);
            adjacent_[c].assign(ids.begin(), ids.end());
            interface_[c] = ids.size() > 1;
            // smallest set: the one contained in all others; own phase if they are not nested
            int best = raster_[c];
            for (int a : ids) {
                bool inside_all = true;
                for (int b : ids)
                    if (a != b && !phases_[a].yield.contained_in(phases_[b].yield)) inside_all = false;
                if (inside_all) {
                    best = a;
                    break;
                }
            }
            yield_phase_[c] = best;
        }
}

TorusGeometry TorusGeometry::homogeneous(const MaterialPhase& phase, int resolution) {
    return TorusGeometry(resolution, std::vector<int>(resolution * resolution, 0), {phase});
}

TorusGeometry TorusGeometry::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("geometry must be a JSON object");
    for (const char* key : {"resolution", "phases", "raster"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("geometry is missing \"") + key + "\"");
    const int n = j.at("resolution").get<int>();
    std::vector<MaterialPhase> phases;
    for (const auto& p : j.at("phases")) phases.push_back(phase_from_json(p));
    std::vector<int> raster;
    for (const auto& v : j.at("raster")) raster.push_back(v.get<int>());
    return TorusGeometry(n, std::move(raster), std::move(phases));
}

TorusGeometry TorusGeometry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open geometry file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("geometry file " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json TorusGeometry::to_json() const {
    nlohmann::json j;
    j["resolution"] = n_;
    j["phases"] = nlohmann::json::array();
    for (const auto& p : phases_) j["phases"].push_back(phase_to_json(p));
    j["raster"] = raster_;
    return j;
}

int TorusGeometry::cell(int i, int j) const {
    i %= n_;
    j %= n_;
    if (i < 0) i += n_;
    if (j < 0) j += n_;
    return j * n_ + i;
}

int TorusGeometry::cell_at(const Vec2& y) const {
    const double y1 = y[0] - std::floor(y[0]), y2 = y[1] - std::floor(y[1]);
    int i = std::min(n_ - 1, static_cast<int>(std::floor(y1 * n_)));
    int j = std::min(n_ - 1, static_cast<int>(std::floor(y2 * n_)));
    return cell(i, j);
}

double TorusGeometry::area_fraction(int phase_id) const {
    return static_cast<double>(std::count(raster_.begin(), raster_.end(), phase_id)) / raster_.size();
}

double dissipation_density(const TorusGeometry& g, const Vec2& y, const Sym3& xi) {
    require_deviatoric(xi, "dissipation_density");
    const int c = g.cell_at(y);
    const Dev5 d = to_dev5(xi);
    if (!g.is_interface(c)) return g.phase(g.phase_of_cell(c)).yield.support(d);
    double h = INFINITY;
    for (int id : g.adjacent_phases(c)) h = std::min(h, g.phase(id).yield.support(d));
    return h;
}

std::string OrderingReport::message() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << "yield sets are not nested for phase pairs:";
    for (auto [a, b] : violations) os << " (" << a << "," << b << ")";
    return os.str();
}

OrderingReport check_phase_ordering(const TorusGeometry& g) {
    OrderingReport r;
    std::set<std::pair<int, int>> pairs;
    const int n = g.resolution();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = g.phase_of_cell(g.cell(i, j));
            for (int nb : {g.cell(i + 1, j), g.cell(i, j + 1)}) {
                const int b = g.phase_of_cell(nb);
                if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
            }
        }
    for (auto [a, b] : pairs) {
        const auto& ya = g.phase(a).yield;
        const auto& yb = g.phase(b).yield;
        if (!ya.contained_in(yb) && !yb.contained_in(ya)) {
            r.ok = false;
            r.violations.push_back({a, b});
        }
    }
    return r;
}

}  // namespace tsplate
