#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tsplate/harness.hpp"

using namespace tsplate;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw SchemaError("not a number in --h: \"" + item + "\"");
        }
        if (!(out.back() > 0)) throw SchemaError("--h values must be positive");
    }
    if (out.empty()) throw SchemaError("--h needs at least one value");
    return out;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + " is not valid JSON: " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin two-scale elastoplastic plates: limit models, 3D model and verification"};
    app.require_subcommand(1);

    std::string config, out, hlist, state, material;

    auto* sim = app.add_subcommand("simulate", "run the evolution of a scenario");
    sim->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "3D model at several thicknesses against the limit model");
    sweep->add_option("--config", config, "scenario JSON with model gamma0 or gamma_inf")->required()->check(CLI::ExistingFile);
    sweep->set_help_flag("--help", "Print this help message and exit");
    sweep->add_option("--h", hlist, "comma separated thicknesses, e.g. 0.2,0.1,0.05")->required();
    sweep->add_option("--out", out, "output directory")->required();

    auto* ver = app.add_subcommand("verify", "check a saved state against the admissible sets");
    ver->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    ver->add_option("--state", state, "state.json written by simulate")->required()->check(CLI::ExistingFile);

    auto* red = app.add_subcommand("reduce", "plane-stress reduced law of one material phase");
    red->add_option("--material", material, "phase JSON")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const Scenario s = load_scenario(config);
            const RunResult r = run_scenario(s, out);
            const auto& sum = r.report["summary"];
            std::cout << "steps " << r.trace.rows.size() - 1 << ", relative balance "
                      << sum["relative_balance"].get<double>() << ", max stability "
                      << sum["max_stability"].get<double>() << ", max admissibility "
                      << sum["max_admissibility"].get<double>() << '\n';
            if (!r.converged) std::cerr << "error: some steps did not converge, see " << out << "/trace.csv\n";
            return r.exit_code();
        }
        if (*sweep) {
            const Scenario s = load_scenario(config);
            const SweepTable t = h_sweep(s, parse_list(hlist), out);
            t.write_csv(std::cout);
            std::cout << "verdict: " << t.to_json()["verdict"].get<std::string>() << '\n';
            for (const auto& r : t.rows)
                if (!r.converged) return 3;
            return 0;
        }
        if (*ver) {
            const Scenario s = load_scenario(config);
            std::cout << verify_state(s, read_json(state)).dump(2) << '\n';
            return 0;
        }
        if (*red) {
            MaterialPhase p;
            try {
                p = phase_from_json(read_json(material));
            } catch (const std::invalid_argument& e) {
                throw SchemaError(std::string("material: ") + e.what());
            }
            std::cout << reduce_material(p).dump(2) << '\n';
            return 0;
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
