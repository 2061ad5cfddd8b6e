// lichlab: configuration-driven runs for the radial Lichnerowicz-type
// equation laboratory.  Subcommands mirror the library pipelines; every run
// writes flat CSV/JSON artifacts under the output directory.

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lichlab/asymptotic.hpp"
#include "lichlab/bounds.hpp"
#include "lichlab/config.hpp"
#include "lichlab/hypotheses.hpp"
#include "lichlab/io.hpp"
#include "lichlab/solver.hpp"

namespace fs = std::filesystem;
using namespace lichlab;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    int grid_override = 0;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    bool quiet = false;
};

RunConfig load_config(const CommonArgs& args) {
    if (args.config_path.empty()) throw config_error("--config <path> is required");
    RunConfig cfg = RunConfig::load(args.config_path);
    if (!args.out_override.empty()) cfg.out_dir = args.out_override;
    if (args.grid_override > 0) cfg.grid_n = args.grid_override;
    if (args.seed_set) cfg.seed = args.seed_override;
    cfg.quiet = args.quiet;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

void note(const RunConfig& cfg, const std::string& msg) {
    if (!cfg.quiet) std::printf("%s\n", msg.c_str());
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

// ---------------------------------------------------------------- model ---

int cmd_model(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    json rep = cfg.report_skeleton();
    rep["dimension"] = M.m;
    rep["r_max"] = M.r_max;
    rep["unit_sphere_area"] = unit_sphere_area(M.m);
    double mu = cfg.raw.value("bounds", json::object()).value("mu", 0.0);
    auto vg = volume_growth_check(M, mu, cfg.grid_n);
    rep["volume_growth"] = {{"mu", mu},
                            {"finite", vg.finite},
                            {"liminf_estimate", vg.liminf_estimate},
                            {"note", vg.note}};
    CsvTable vt;
    vt.header = {"r", "log_vol_over_r_pow"};
    vt.columns = {vg.radii, vg.ratio};
    write_csv(out_path(cfg, "volume.csv"), vt);

    GreenKernel G = green_kernel(M, cfg.grid_n);
    rep["green"] = {{"nonparabolic", G.nonparabolic}, {"tail_model", G.tail_model}};
    if (G.nonparabolic) {
        rep["green"]["tail_integral"] = G.tail_integral;
        rep["green"]["G_at_r_max"] = G.G.v.back();
        rep["green"]["t_range"] = {G.t_min(), G.t_max()};
        auto sh = green_superharmonic_check(M, G);
        rep["green"]["max_discrete_laplacian_excess"] = sh.max_excess;
        rep["green"]["superharmonic"] = sh.holds;
        CsvTable gt;
        gt.header = {"r", "G", "t"};
        gt.columns = {G.G.r, G.G.v, G.t_of_r.v};
        write_csv(out_path(cfg, "green.csv"), gt);
    }
    write_json(out_path(cfg, "model.json"), rep);
    note(cfg, "model: wrote model.json, volume.csv" +
                  std::string(G.nonparabolic ? ", green.csv" : " (parabolic: no green.csv)"));
    return 0;
}

// ------------------------------------------------------------- spectrum ---

int cmd_spectrum(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    std::vector<double> radii =
        cfg.raw.value("spectrum", json::object()).value("radii", std::vector<double>{});
    if (radii.empty())
        for (double R = M.r_max / 8; R <= M.r_max * (1 + 1e-12); R *= 2) radii.push_back(R);
    SpectralProfile prof = spectral_profile(M, C.a, radii, cfg.grid_n);
    CsvTable t;
    t.header = {"R", "lambda1"};
    t.columns = {prof.radii, prof.eigenvalues};
    write_csv(out_path(cfg, "spectrum.csv"), t);
    json rep = cfg.report_skeleton();
    rep["limit_estimate"] = prof.limit_estimate;
    rep["tail_note"] = prof.tail_note;
    auto ev = lambda1_at_infinity(M, C.a, cfg.grid_n);
    rep["lambda1_M"] = {{"value", ev.value},
                        {"error_estimate", ev.error_estimate},
                        {"certified_negative", ev.certified_negative}};
    write_json(out_path(cfg, "spectrum.json"), rep);
    note(cfg, "spectrum: limit estimate " + format_double(prof.limit_estimate));
    return 0;
}

// ---------------------------------------------------------------- solve ---

BarrierPair solve_barriers(const ModelManifold& M, const CoefficientSet& C, double R,
                           double boundary, int grid_n) {
    RatioBounds rb = ratio_bounds(C, M, grid_n);
    RadialGrid grid(0.0, R, grid_n);
    RadialOperator op(M, grid, true);
    BarrierPair out;
    out.domain_hi = R;
    if (is_finite(rb.H) && is_finite(rb.K) && rb.script_K > 0) {
        double zeta = std::max(1.0, boundary / rb.script_H);
        out.sub = certify(M, C, op, std::vector<double>(grid.size(), rb.script_K),
                          BarrierRole::subsolution);
        out.sup = certify(M, C, op, std::vector<double>(grid.size(), zeta * rb.script_H),
                          BarrierRole::supersolution);
        if (out.sub.certified && out.sup.certified) return out;
    }
    BlowupBarriers bb = prepare_barriers(C, M, R, std::nullopt, grid_n);
    double zeta = std::max(1.0, boundary / bb.base_sup(R));
    std::vector<double> sup_vals(grid.size());
    for (int i = 0; i < grid.size(); ++i) sup_vals[i] = zeta * bb.base_sup(grid.node(i));
    out.sup = certify(M, C, op, std::move(sup_vals), BarrierRole::supersolution,
                      tol::barrier * std::max(1.0, zeta));
    out.sub = bb.sub;
    return out;
}

json solve_report_json(const RunConfig& cfg, const SolveReport& rep) {
    json j = cfg.report_skeleton();
    j["iterations"] = rep.iterations;
    j["residual_max"] = rep.residual_max;
    j["residual_max_abs"] = rep.residual_max_abs;
    j["lambda_shift_max"] = rep.lambda_shift_max;
    j["certificates"] = {{"monotone_iterates", rep.monotone_certificate},
                         {"sandwich", rep.sandwich_certificate},
                         {"trace_decreasing_after_burnin", rep.trace_decreasing_after_burnin}};
    json bc = json::object();
    for (const auto& [name, ok] : rep.bound_checks) bc[name] = ok;
    j["bound_checks"] = bc;
    json trace = json::array();
    for (double d : rep.trace) trace.push_back(d);
    j["trace"] = trace;
    return j;
}

int cmd_solve(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    const json& s = cfg.raw.value("solve", json::object());
    DirichletProblem P;
    P.M = M;
    P.C = C;
    P.radius = s.value("radius", 1.0);
    P.boundary_value = s.value("boundary", 1.0);
    P.grid_n = cfg.grid_n;
    P.barriers = solve_barriers(M, C, P.radius, P.boundary_value, cfg.grid_n);
    SolveReport rep = solve_dirichlet(P);

    // attach bound checks where the hypotheses hold
    double mu = cfg.raw.value("bounds", json::object()).value("mu", 0.0);
    try {
        auto bil = bilateral_bound_check(M, C, rep.solution, mu, cfg.grid_n);
        rep.bound_checks.emplace_back("bilateral_pinch", bil.holds);
    } catch (const hypothesis_error&) {
        rep.bound_checks.emplace_back("bilateral_pinch_hypotheses", false);
    }
    try {
        auto us = upper_bound_ustar(M, C, rep.solution, 1.0, mu, cfg.grid_n);
        rep.bound_checks.emplace_back("ustar_upper_bound", us.bound_holds);
    } catch (const hypothesis_error&) {
        rep.bound_checks.emplace_back("ustar_hypotheses", false);
    }

    CsvTable t;
    t.header = {"r", "u"};
    t.columns = {rep.solution.r, rep.solution.v};
    write_csv(out_path(cfg, "solution.csv"), t);
    write_json(out_path(cfg, "report.json"), solve_report_json(cfg, rep));
    note(cfg, "solve: " + std::to_string(rep.iterations) +
                  " iterations, residual " + format_double(rep.residual_max));
    return 0;
}

// -------------------------------------------------------------- maximal ---

int cmd_maximal(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    const json& m = cfg.raw.value("maximal", json::object());
    std::vector<double> radii = m.value("radii", std::vector<double>{});
    if (radii.empty())
        for (double R = M.r_max / 8; R <= M.r_max * (1 + 1e-12); R *= 2) radii.push_back(R);
    std::string sub_kind = m.value("subsolution", "auto");

    CertifiedFunction u_minus;
    RatioBounds rb = ratio_bounds(C, M, cfg.grid_n);
    bool have = false;
    if (sub_kind != "theorem_a" && is_finite(rb.H) && is_finite(rb.K) && rb.script_K > 0) {
        RadialGrid grid(0.0, M.r_max, cfg.grid_n);
        RadialOperator op(M, grid, true);
        u_minus = certify(M, C, op, std::vector<double>(grid.size(), rb.script_K),
                          BarrierRole::subsolution);
        have = u_minus.certified;
    }
    if (!have) u_minus = theoremA_subsolution(C, M, cfg.grid_n);

    MaximalSolutionReport rep = maximal_solution(M, C, u_minus, radii, cfg.grid_n);
    CsvTable t;
    t.header = {"r", "u"};
    t.columns = {rep.solution.r, rep.solution.v};
    write_csv(out_path(cfg, "maximal.csv"), t);
    json j = cfg.report_skeleton();
    j["exhaustion_radii"] = rep.exhaustion_radii;
    j["monotone_decreasing_certificate"] = rep.monotone_decreasing_certificate;
    j["above_subsolution_certificate"] = rep.above_subsolution_certificate;
    j["core"] = radial_function_json(rep.solution);
    write_json(out_path(cfg, "report.json"), j);
    note(cfg, "maximal: core limit in [" + format_double(rep.solution.min_value()) + ", " +
                  format_double(rep.solution.max_value()) + "]");
    return 0;
}

// ---------------------------------------------------------------- bounds ---

int cmd_bounds(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    const json& b = cfg.raw.value("bounds", json::object());
    double mu = b.value("mu", 0.0);
    double gamma = b.value("gamma", 1.0);

    DirichletProblem P;
    P.M = M;
    P.C = C;
    P.radius = b.value("radius", cfg.raw.value("solve", json::object()).value("radius", 1.0));
    P.boundary_value =
        b.value("boundary", cfg.raw.value("solve", json::object()).value("boundary", 1.0));
    P.grid_n = cfg.grid_n;
    P.barriers = solve_barriers(M, C, P.radius, P.boundary_value, cfg.grid_n);
    SolveReport sol = solve_dirichlet(P);

    json j = cfg.report_skeleton();
    json verdicts = json::object();
    int exit_code = 0;
    try {
        auto us = upper_bound_ustar(M, C, sol.solution, gamma, mu, cfg.grid_n);
        verdicts["ustar"] = {{"gamma", gamma},
                             {"gamma_star", us.gamma_sets.gamma_star},
                             {"H_gamma_star", us.gamma_sets.H_gamma_star},
                             {"omega_empty", us.gamma_sets.omega_empty},
                             {"bound", us.ustar_bound},
                             {"u_max", us.u_max},
                             {"holds", us.bound_holds}};
        if (!us.bound_holds) exit_code = 3;
    } catch (const hypothesis_error& e) {
        verdicts["ustar"] = {{"hypothesis_failure", e.what()}};
        exit_code = 2;
    }
    try {
        auto bil = bilateral_bound_check(M, C, sol.solution, mu, cfg.grid_n);
        verdicts["bilateral"] = {{"H", bil.ratios.H},
                                 {"K", bil.ratios.K},
                                 {"script_H", bil.ratios.script_H},
                                 {"script_K", bil.ratios.script_K},
                                 {"margin_low", bil.margin_low},
                                 {"margin_high", bil.margin_high},
                                 {"holds", bil.holds}};
        if (!bil.holds) exit_code = 3;
    } catch (const hypothesis_error& e) {
        verdicts["bilateral"] = {{"hypothesis_failure", e.what()}};
        exit_code = 2;
    }
    j["bound_checks"] = verdicts;
    write_json(out_path(cfg, "bounds.json"), j);
    note(cfg, "bounds: wrote bounds.json");
    return exit_code;
}

// -------------------------------------------------------------- oscillate ---

int cmd_oscillate(const RunConfig& cfg) {
    const json& o = cfg.raw.value("oscillate", json::object());
    std::string kind_s = o.value("kind", "kappa");
    BetaKind kind;
    if (kind_s == "kappa") kind = BetaKind::kappa_threshold;
    else if (kind_s == "constant") kind = BetaKind::constant_lambda;
    else if (kind_s == "euler") kind = BetaKind::euler_reference;
    else if (kind_s == "super_euler") kind = BetaKind::super_euler_control;
    else throw config_error("oscillate.kind must be kappa|constant|euler|super_euler");
    double T = o.value("t_start", std::exp(2.0));
    double Tend = o.value("t_end", 1e6);
    double beta0 = o.value("beta0", 1.0), dbeta0 = o.value("dbeta0", 1.0);
    double lambda = o.value("lambda", 1.0), eps = o.value("epsilon", 0.5);
    OscillationReport rep = integrate_beta(kind, T, Tend, beta0, dbeta0, lambda, eps);

    CsvTable t;
    t.header = {"t", "beta", "dbeta"};
    t.columns = {rep.trace_t, rep.trace_beta, rep.trace_dbeta};
    write_csv(out_path(cfg, "trace.csv"), t);
    json j = cfg.report_skeleton();
    j["kind"] = kind_s;
    j["window"] = {rep.t_start, rep.t_end};
    j["zero_count"] = rep.zero_count;
    j["zeros"] = rep.zeros;
    j["constraint_be_bed"] = rep.constraint_be_bed;
    j["ratio_drift"] = rep.ratio_drift;
    json samples = json::array();
    for (std::size_t i = 0; i < rep.ratio_t.size(); ++i)
        samples.push_back({rep.ratio_t[i], rep.ratio_values[i]});
    j["asymptotic_ratio_samples"] = samples;
    write_json(out_path(cfg, "oscillation.json"), j);
    note(cfg, "oscillate: zero_count " + std::to_string(rep.zero_count));
    return 0;
}

// --------------------------------------------------------------- barrier ---

int cmd_barrier(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    const json& b = cfg.raw.value("barrier", json::object());
    std::string mode_s = b.value("mode", "kappa");
    BarrierMode mode;
    if (mode_s == "kappa") mode = BarrierMode::kappa_threshold;
    else if (mode_s == "constant") mode = BarrierMode::constant_lambda;
    else throw config_error("barrier.mode must be kappa|constant");
    double lambda = b.value("lambda", 1.0);
    double T = b.value("T", std::exp(2.0));
    GreenKernel G = green_kernel(M, cfg.grid_n);
    BarrierEnvelope env = finite_index_barrier(M, G, mode, lambda, T, cfg.grid_n);

    CsvTable t;
    t.header = {"r", "u", "a"};
    std::vector<double> av;
    for (double r : env.u.r) av.push_back(env.a_field(r));
    t.columns = {env.u.r, env.u.v, av};
    write_csv(out_path(cfg, "barrier.csv"), t);
    json j = cfg.report_skeleton();
    j["mode"] = mode_s;
    j["lambda"] = lambda;
    j["T"] = T;
    j["worst_residual"] = env.worst_residual;
    j["certified"] = env.certified;
    j["certified_nodes"] = env.certified_r.size();
    write_json(out_path(cfg, "barrier.json"), j);
    note(cfg, "barrier: worst residual " + format_double(env.worst_residual));
    return env.certified ? 0 : 3;
}

// --------------------------------------------------------------- compare ---

int cmd_compare(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    const json& c = cfg.raw.value("compare", json::object());
    double R = c.value("radius", 1.0);
    double blo = c.value("boundary_lo", 1.0), bhi = c.value("boundary_hi", 2.0);
    if (!(blo <= bhi)) throw config_error("compare: boundary_lo must not exceed boundary_hi");

    DirichletProblem P;
    P.M = M;
    P.C = C;
    P.radius = R;
    P.grid_n = cfg.grid_n;
    P.boundary_value = blo;
    P.barriers = solve_barriers(M, C, R, blo, cfg.grid_n);
    SolveReport lo = solve_dirichlet(P);
    P.boundary_value = bhi;
    P.barriers = solve_barriers(M, C, R, bhi, cfg.grid_n);
    SolveReport hi = solve_dirichlet(P);

    // the lower solution is a subsolution of the upper problem and vice
    // versa; certify both for the ordered-comparison verdict
    RadialGrid grid(0.0, R, cfg.grid_n);
    RadialOperator op(M, grid, true);
    CertifiedFunction u = certify(M, C, op, lo.solution.v, BarrierRole::subsolution,
                                  10 * tol::residual);
    CertifiedFunction v = certify(M, C, op, hi.solution.v, BarrierRole::supersolution,
                                  10 * tol::residual);
    bool ok = compare(u, v);

    UniquenessDiagnostic uv = uniqueness_l2_diagnostic(lo.solution, hi.solution, M);
    json j = cfg.report_skeleton();
    j["comparison_holds"] = ok;
    j["uniqueness_l2"] = {{"condition_uvint", uv.condition_uvint},
                          {"vacuous", uv.vacuous},
                          {"tail_model", uv.tail_model}};
    write_json(out_path(cfg, "compare.json"), j);
    note(cfg, std::string("compare: ") + (ok ? "u <= v holds" : "ordering violated"));
    return ok ? 0 : 3;
}

// ------------------------------------------------------------ hypotheses ---

int cmd_hypotheses(const RunConfig& cfg) {
    ModelManifold M = cfg.model();
    CoefficientSet C = cfg.coefficients();
    const json& h = cfg.raw.value("hypotheses", json::object());
    std::string theorem = h.value("theorem", "A");
    json j = cfg.report_skeleton();
    bool all = true;

    if (theorem == "A") {
        auto hy = theoremA_hypotheses(C, M, cfg.grid_n);
        j["theorem"] = "A";
        j["predicates"] = {
            {"b_positive_outside_compact", hy.b_positive_outside_compact},
            {"lambda1_B0", hy.lambda1_B0},
            {"lambda1_B0_positive", hy.spectrally_small_B0},
            {"lambda1_M_value", hy.lambda1_M.value},
            {"lambda1_M_error_estimate", hy.lambda1_M.error_estimate},
            {"lambda1_M_certified_negative", hy.lambda1_M.certified_negative}};
        all = hy.all();
    } else if (theorem == "B") {
        double R1 = h.value("omega1", 2.0), R2 = h.value("omega2", 3.0);
        auto hy = theoremB_hypotheses(C, M, R1, R2, cfg.grid_n);
        j["theorem"] = "B";
        j["predicates"] = {{"lambda1_B0", hy.lambda1_B0},
                           {"hp1_lambda1_B0_positive", hy.hp1},
                           {"ratio_sup", hy.ratio_sup},
                           {"hp2_ratio_finite", hy.hp2},
                           {"lambda1_omega2_minus_a", hy.lambda1_omega2_neg_a},
                           {"hp3_lambda1_positive", hy.hp3},
                           {"c0_inside_omega1", hy.c0_inside_omega1}};
        all = hy.all();
    } else if (theorem == "apriori") {
        double mu = h.value("mu", 0.0);
        auto hy = apriori_hypotheses(C, M, mu, cfg.grid_n);
        j["theorem"] = "apriori";
        j["predicates"] = {{"b_positive", hy.b_positive},
                           {"c_positive", hy.c_positive},
                           {"brmu_b", hy.brmu_b},
                           {"brmu_c", hy.brmu_c},
                           {"bvol", hy.bvol},
                           {"H", hy.ratios.H},
                           {"K", hy.ratios.K},
                           {"script_H", hy.ratios.script_H},
                           {"script_K", hy.ratios.script_K},
                           {"sup_apc", hy.sup_apc},
                           {"sup_amb", hy.sup_amb}};
        all = hy.all();
    } else if (theorem == "comparison") {
        double omega = h.value("omega", 0.0);
        double R = h.value("radius", M.r_max / 2);
        DirichletProblem P;
        P.M = M;
        P.C = C;
        P.radius = R;
        P.grid_n = cfg.grid_n;
        P.boundary_value = h.value("boundary", 1.0);
        P.barriers = solve_barriers(M, C, R, P.boundary_value, cfg.grid_n);
        SolveReport sol = solve_dirichlet(P);
        auto hy = comparison_hypotheses(C, M, omega, sol.solution, sol.solution, cfg.grid_n);
        j["theorem"] = "comparison";
        j["predicates"] = {{"i_b_positive_outside", hy.b_positive_outside},
                           {"ii_c_nonnegative_outside", hy.c_nonnegative_outside},
                           {"iii_sup_aminus_over_b", hy.sup_amb_ratio},
                           {"iv_sup_c_over_b", hy.sup_cb_ratio},
                           {"ratios_finite", hy.ratios_finite},
                           {"vlim_tail_min", hy.v_tail_min},
                           {"ulim_tail_max", hy.u_tail_max}};
        all = hy.all();
    } else {
        throw config_error("hypotheses.theorem must be A|B|apriori|comparison");
    }
    j["all_pass"] = all;
    write_json(out_path(cfg, "hypotheses.json"), j);
    note(cfg, "hypotheses(" + theorem + "): " + (all ? "all predicates hold" : "FAILURES"));
    return all ? 0 : 2;
}

// ------------------------------------------------------------------ plot ---

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out, bool logx, bool logy,
             const std::string& title) {
    if (csvs.empty()) throw config_error("plot: need at least one CSV");
    std::vector<std::pair<std::string, CsvTable>> series;
    for (const auto& path : csvs) {
        CsvTable t = read_csv(path);
        if (t.columns.size() < 2 || t.columns[0].empty())
            throw config_error("plot: " + path + " needs two nonempty columns");
        series.emplace_back(fs::path(path).stem().string(), t);
    }
    PlotOptions opt;
    opt.log_x = logx;
    opt.log_y = logy;
    opt.title = title;
    write_svg_plot(out, series, opt);
    return 0;
}

// ------------------------------------------------------------------ demo ---

struct DemoLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

#include "demo_scenarios.inc"

int cmd_demo(int grid_n, std::uint64_t seed) {
    std::vector<DemoLine> lines = run_demo_suite(grid_n, seed);
    bool all = true;
    std::printf("%-58s %s\n", "scenario", "verdict");
    for (const auto& l : lines) {
        std::printf("%-58s %s  %s\n", l.name.c_str(), l.pass ? "PASS" : "FAIL",
                    l.detail.c_str());
        all = all && l.pass;
    }
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lichlab: radial laboratory for Delta u + a u - b u^sigma + c u^tau = 0"};
    app.require_subcommand(1);
    CommonArgs args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "run configuration (JSON)");
        sub->add_option("--out", args.out_override, "output directory override");
        sub->add_option("--grid-n", args.grid_override, "grid interval count override");
        sub->add_option("--seed", args.seed_override, "seed override")
            ->each([&](const std::string&) { args.seed_set = true; });
        sub->add_flag("--quiet", args.quiet, "suppress progress notes");
    };

    CLI::App* c_model = app.add_subcommand("model", "model geometry, volume, Green kernel");
    CLI::App* c_spec = app.add_subcommand("spectrum", "first-eigenvalue profile of Delta + a");
    CLI::App* c_solve = app.add_subcommand("solve", "Dirichlet solve between barriers");
    CLI::App* c_max = app.add_subcommand("maximal", "maximal solution via blow-up exhaustion");
    CLI::App* c_bounds = app.add_subcommand("bounds", "a priori bound checkers");
    CLI::App* c_osc = app.add_subcommand("oscillate", "barrier ODE integration and zero count");
    CLI::App* c_barr = app.add_subcommand("barrier", "finite-index barrier envelope");
    CLI::App* c_cmp = app.add_subcommand("compare", "ordered boundary-pair comparison");
    CLI::App* c_hyp = app.add_subcommand("hypotheses", "theorem predicate table");
    for (CLI::App* sub : {c_model, c_spec, c_solve, c_max, c_bounds, c_osc, c_barr, c_cmp, c_hyp})
        add_common(sub);

    std::vector<std::string> plot_csvs;
    std::string plot_out = "plot.svg", plot_title;
    bool plot_logx = false, plot_logy = false;
    CLI::App* c_plot = app.add_subcommand("plot", "SVG line plot from CSV files");
    c_plot->add_option("csv", plot_csvs, "input CSV files")->required();
    c_plot->add_option("--out", plot_out, "output SVG path");
    c_plot->add_flag("--logx", plot_logx, "logarithmic x axis");
    c_plot->add_flag("--logy", plot_logy, "logarithmic y axis");
    c_plot->add_option("--title", plot_title, "plot title");

    int demo_grid = defaults::grid_n;
    std::uint64_t demo_seed = 42;
    CLI::App* c_demo = app.add_subcommand("demo", "run the bundled scenario suite");
    c_demo->add_option("--grid-n", demo_grid, "grid interval count");
    c_demo->add_option("--seed", demo_seed, "sweep seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_plot->parsed()) return cmd_plot(plot_csvs, plot_out, plot_logx, plot_logy, plot_title);
        if (c_demo->parsed()) return cmd_demo(demo_grid, demo_seed);
        RunConfig cfg = load_config(args);
        if (c_model->parsed()) return cmd_model(cfg);
        if (c_spec->parsed()) return cmd_spectrum(cfg);
        if (c_solve->parsed()) return cmd_solve(cfg);
        if (c_max->parsed()) return cmd_maximal(cfg);
        if (c_bounds->parsed()) return cmd_bounds(cfg);
        if (c_osc->parsed()) return cmd_oscillate(cfg);
        if (c_barr->parsed()) return cmd_barrier(cfg);
        if (c_cmp->parsed()) return cmd_compare(cfg);
        if (c_hyp->parsed()) return cmd_hypotheses(cfg);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const hypothesis_error& e) {
        std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
