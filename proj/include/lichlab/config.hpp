#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lichlab/common.hpp"
#include "lichlab/expression.hpp"
#include "lichlab/io.hpp"
#include "lichlab/model.hpp"
#include "lichlab/nonlinearity.hpp"

namespace lichlab {

// A run is described by one JSON document.  Coefficients are closed-form
// expression strings over {r, exp, log, pow, tanh} or two-column CSV
// samples; tabulated warpings are CSV with header r,g.
struct RunConfig {
    json raw;
    std::string config_hash;
    std::string out_dir = "out";
    int grid_n = defaults::grid_n;
    std::uint64_t seed = 42;
    bool quiet = false;

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config: " + path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        RunConfig cfg;
        try {
            cfg.raw = json::parse(text);
        } catch (const std::exception& e) {
            throw config_error(std::string("config is not valid JSON: ") + e.what());
        }
        cfg.config_hash = fnv1a_hash(cfg.raw.dump());
        if (cfg.raw.contains("output") && cfg.raw["output"].contains("dir"))
            cfg.out_dir = cfg.raw["output"]["dir"].get<std::string>();
        if (cfg.raw.contains("seed")) cfg.seed = cfg.raw["seed"].get<std::uint64_t>();
        if (cfg.raw.contains("model") && cfg.raw["model"].contains("grid_n"))
            cfg.grid_n = cfg.raw["model"]["grid_n"].get<int>();
        if (cfg.grid_n < 8) throw config_error("model.grid_n too small");
        return cfg;
    }

    ModelManifold model() const {
        if (!raw.contains("model")) throw config_error("config needs a \"model\" section");
        const json& m = raw["model"];
        std::string kind = m.value("kind", "euclidean");
        int dim = m.value("m", 3);
        double r_max = m.value("r_max", 10.0);
        if (kind == "euclidean") return ModelManifold(dim, WarpingFunction::euclidean(), r_max);
        if (kind == "hyperbolic")
            return ModelManifold(dim, WarpingFunction::hyperbolic(m.value("k", 1.0)), r_max);
        if (kind == "tabulated") {
            if (!m.contains("csv")) throw config_error("tabulated warping needs model.csv");
            CsvTable t = read_csv(m["csv"].get<std::string>());
            if (t.header.size() != 2 || t.header[0] != "r" || t.header[1] != "g")
                throw config_error("tabulated warping CSV must have header r,g");
            return ModelManifold(dim, WarpingFunction::tabulated(t.columns[0], t.columns[1]),
                                 r_max);
        }
        if (kind == "riccati") {
            if (!m.contains("curvature_bound"))
                throw config_error("riccati warping needs model.curvature_bound (expression)");
            Expression F = Expression::parse(m["curvature_bound"].get<std::string>());
            const int samples = 512;
            std::vector<double> rr(samples + 1), fv(samples + 1);
            for (int i = 0; i <= samples; ++i) {
                rr[i] = r_max * i / samples;
                fv[i] = F(rr[i]);
            }
            return ModelManifold(dim,
                                 riccati_warping(RadialFunction(rr, fv), r_max, grid_n), r_max);
        }
        throw config_error("unknown model.kind '" + kind +
                           "' (euclidean, hyperbolic, tabulated, riccati)");
    }

    RadialField field(const std::string& name) const {
        const json& c = raw.at("coefficients");
        std::string csv_key = name + "_csv";
        if (c.contains(csv_key)) {
            CsvTable t = read_csv(c[csv_key].get<std::string>());
            if (t.header.size() != 2)
                throw config_error("coefficient CSV must have two columns (r,value)");
            return RadialField::from_samples(t.columns[0], t.columns[1]);
        }
        if (!c.contains(name)) return RadialField::constant(0.0);
        if (c[name].is_number()) return RadialField::constant(c[name].get<double>());
        return RadialField::from_expression(c[name].get<std::string>());
    }

    CoefficientSet coefficients() const {
        if (!raw.contains("coefficients"))
            throw config_error("config needs a \"coefficients\" section");
        const json& c = raw["coefficients"];
        double sigma = c.value("sigma", 3.0);
        double tau = c.value("tau", -1.0);
        if (!(sigma > 1.0))
            throw config_error("coefficients.sigma = " + std::to_string(sigma) +
                               " violates the superlinearity hypothesis sigma > 1");
        if (!(tau < 1.0))
            throw config_error("coefficients.tau = " + std::to_string(tau) +
                               " violates the sublinearity hypothesis tau < 1");
        CoefficientSet C(field("a"), field("b"), field("c"), sigma, tau);
        double r_probe = raw["model"].value("r_max", 10.0);
        C.validate_signs(r_probe);
        return C;
    }

    json tolerances() const {
        json j;
        j["step"] = tol::step;
        j["residual"] = tol::residual;
        j["compare"] = tol::compare;
        j["barrier_certificate"] = tol::barrier;
        j["rayleigh_rel"] = tol::rayleigh_rel;
        j["green_superharmonic"] = tol::green_superharmonic;
        j["barrier_envelope"] = tol::barrier_envelope;
        j["blowup_core"] = tol::blowup_core;
        return j;
    }

    json report_skeleton() const {
        json j;
        j["config_hash"] = config_hash;
        j["tolerances"] = tolerances();
        j["grid_n"] = grid_n;
        j["seed"] = seed;
        return j;
    }
};

}  // namespace lichlab
