// Command-line front end: computes admissible-radius bounds, solves the
// extremal radial map family, evaluates distortion/energy functionals and
// runs the independent verification suites, emitting JSON or CSV reports.

#include "annuli/errors.hpp"
#include "annuli/functionals.hpp"
#include "annuli/io.hpp"
#include "annuli/maps.hpp"
#include "annuli/metric.hpp"
#include "annuli/minseq.hpp"
#include "annuli/nitsche.hpp"
#include "annuli/numerics.hpp"
#include "annuli/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <random>

namespace {

using namespace annuli;

int log_level() {
    const char* env = std::getenv("ANNULI_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[annuli] " << msg << "\n";
}

struct CommonOpts {
    std::string metric_spec;
    std::string config_path;
    RunConfig cfg;
    bool have_tau = false, have_sigma = false, have_r = false;
    double tau = 0, sigma = 0, r = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_r) {
    cmd->add_option("--metric", o.metric_spec, "builtin metric name, optionally name:p1,p2");
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--tau", o.tau, "inner radius of the target annulus")->each([&](const std::string&) { o.have_tau = true; });
    cmd->add_option("--sigma", o.sigma, "outer radius of the target annulus")->each([&](const std::string&) { o.have_sigma = true; });
    if (with_r)
        cmd->add_option("--r", o.r, "inner radius of the source annulus A(r,1)")->each([&](const std::string&) { o.have_r = true; });
    cmd->add_option("--rel-tol", o.cfg.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", o.cfg.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--format", o.cfg.format, "output format: json|csv|text");
    cmd->add_option("--out", o.cfg.out_path, "write the report to this file instead of stdout");
    cmd->add_option("--seed", o.cfg.seed, "seed for randomized verification runs");
}

RunConfig resolve(CommonOpts& o) {
    if (!o.config_path.empty()) load_config_file(o.config_path, o.cfg);
    if (!o.metric_spec.empty()) parse_metric_spec(o.metric_spec, o.cfg);
    if (o.have_tau) o.cfg.tau = o.tau;
    if (o.have_sigma) o.cfg.sigma = o.sigma;
    if (o.have_r) o.cfg.r = o.r;
    return o.cfg;
}

void emit_bound(const RunConfig& cfg) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_target_geometry();
    const BoundResult b = nitsche_bound(m, g);
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("tau", g.tau);
    w.field("sigma", g.sigma);
    w.field("r_star", b.r_star);
    w.field("degenerate", b.degenerate);
    w.field("err_est", b.err_est);
    w.end_object();
    write_output(cfg, w.str());
}

void emit_solve_c(const RunConfig& cfg) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_geometry();
    const BoundResult b = nitsche_bound(m, g);
    const NitscheProfile p = solve_c(m, g);
    write_output(cfg, profile_to_json(cfg, p, b.r_star, b.degenerate));
}

void dump_profile_csv(const RunConfig& cfg, const NitscheProfile& p, const std::string& path) {
    CsvWriter csv({"s", "phi", "q", "sPhiPrime", "K"});
    for (const auto& [s, phi] : p.nodes()) {
        const double sp = s * p.phi_prime(s);
        const double K = std::isfinite(sp) && sp > 0.0 ? 0.5 * (sp + 1.0 / sp)
                                                       : std::numeric_limits<double>::infinity();
        csv.row({s, phi, std::exp(phi), sp, K});
    }
    RunConfig file_cfg = cfg;
    file_cfg.out_path = path;
    write_output(file_cfg, csv.str());
}

void emit_map_eval(const RunConfig& cfg, const std::string& profile_path, const std::string& at,
                   bool inverse, const std::string& dump_path) {
    const NitscheProfile p = profile_from_json_file(profile_path);
    if (!dump_path.empty()) dump_profile_csv(cfg, p, dump_path);
    if (at.empty()) {
        if (dump_path.empty()) throw UsageError("map-eval: need --at s,t or --dump-profile");
        return;
    }
    const auto comma = at.find(',');
    if (comma == std::string::npos) throw UsageError("map-eval: --at expects 's,t'");
    const double s = std::stod(at.substr(0, comma));
    const double t = std::stod(at.substr(comma + 1));

    auto shared = std::make_shared<NitscheProfile>(p);
    const RadialMap map =
        nitsche_map(shared, inverse ? MapDirection::inverse : MapDirection::forward);
    const std::complex<double> z = std::polar(s, t);
    const std::complex<double> w = map_eval(map, z);
    const PointDerivatives d = map_derivatives(map, z);

    JsonWriter out;
    out.begin_object();
    out.field("schema_version", 1);
    out.field("direction", inverse ? std::string("inverse") : std::string("forward"));
    out.field("s", s);
    out.field("t", t);
    out.field("re", w.real());
    out.field("im", w.imag());
    out.field("modulus", std::abs(w));
    out.field("J", d.J);
    out.field("K", d.K);
    out.end_object();
    write_output(cfg, out.str());
}

void emit_curvature(const RunConfig& cfg, double at) {
    const RadialMetric m = cfg.make_metric();
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("s", at);
    w.field("K", gauss_curvature(m, at));
    w.end_object();
    write_output(cfg, w.str());
}

void emit_regularity(const RunConfig& cfg, int grid_n) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_target_geometry();
    const RegularityReport rep = check_regularity(m, g.tau, g.sigma, grid_n);
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("tau", g.tau);
    w.field("sigma", g.sigma);
    w.field("inf_s_rho", rep.inf_s_rho);
    w.field("inf_location", rep.inf_location);
    w.field("boundary_limit", rep.boundary_limit);
    w.field("curvature_bound", rep.curvature_bound);
    w.field("is_regular", rep.is_regular);
    w.end_object();
    write_output(cfg, w.str());
}

RadialMap make_named_map(const std::string& spec, const RadialMetric& m,
                         const AnnulusGeometry& g, MapDirection dir,
                         std::shared_ptr<NitscheProfile>& hold) {
    if (spec == "nitsche") {
        hold = std::make_shared<NitscheProfile>(solve_c(m, g));
        return nitsche_map(hold, dir);
    }
    if (spec == "critical") {
        hold = std::make_shared<NitscheProfile>(critical_profile(m, g));
        return nitsche_map(hold, dir);
    }
    if (spec.rfind("power:", 0) == 0) {
        const double alpha = std::stod(spec.substr(6));
        if (!(alpha > 0.0)) throw UsageError("power map needs alpha > 0");
        if (dir == MapDirection::forward) {
            // P(tau) = r, P(sigma) = 1 forces the scale; alpha fixes the shape
            const double scale = 1.0 / std::pow(g.sigma, alpha);
            return power_map(g.tau, g.sigma, alpha, scale, dir);
        }
        const double scale = g.sigma / std::pow(1.0, alpha);
        return power_map(g.r, 1.0, alpha, scale, dir);
    }
    throw UsageError("unknown --map '" + spec + "' (nitsche|critical|power:ALPHA)");
}

void emit_distortion(const RunConfig& cfg, const std::string& map_spec) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_geometry();
    std::shared_ptr<NitscheProfile> hold;
    const RadialMap map = make_named_map(map_spec, m, g, MapDirection::forward, hold);
    const ValueWithError k = mean_distortion_radial(map, m);
    const RegimeVerdict v = classify_regime(m, g);

    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("tau", g.tau);
    w.field("sigma", g.sigma);
    w.field("r", g.r);
    w.field("map", map_spec);
    w.field("regime", std::string(to_string(v.regime)));
    w.field("r_star", v.r_star);
    if (hold) w.field("c", hold->c());
    w.field("K_rho", k.value);
    w.field("err_est", k.err);
    w.end_object();
    write_output(cfg, w.str());
}

void emit_energy(const RunConfig& cfg, const std::string& map_spec) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_geometry();
    std::shared_ptr<NitscheProfile> hold;
    const RadialMap map = make_named_map(map_spec, m, g, MapDirection::inverse, hold);
    const ValueWithError e = energy_radial(map, m);

    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("tau", g.tau);
    w.field("sigma", g.sigma);
    w.field("r", g.r);
    w.field("map", map_spec);
    if (hold) w.field("c", hold->c());
    w.field("E_rho", e.value);
    w.field("err_est", e.err);
    w.end_object();
    write_output(cfg, w.str());
}

std::vector<double> parse_sweep(const std::string& spec) {
    // r=0.05:0.95:0.05
    if (spec.rfind("r=", 0) != 0) throw UsageError("--sweep expects r=start:stop:step");
    std::istringstream in(spec.substr(2));
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
        throw UsageError("--sweep expects r=start:stop:step");
    const double start = std::stod(a), stop = std::stod(b), step = std::stod(c);
    if (!(step > 0.0) || !(start <= stop)) throw UsageError("--sweep: bad range");
    std::vector<double> rs;
    for (double x = start; x <= stop + 1e-12; x += step) rs.push_back(x);
    return rs;
}

void emit_report(const RunConfig& cfg, const std::string& sweep) {
    const RadialMetric m = cfg.make_metric();
    std::vector<double> rs;
    if (!sweep.empty())
        rs = parse_sweep(sweep);
    else if (cfg.r)
        rs.push_back(*cfg.r);
    else
        throw UsageError("report: need --r or --sweep");

    if (cfg.format == "csv") {
        CsvWriter csv({"r", "regime", "c", "K_rho", "E_rho", "lower_bound", "gap", "quadrature_err"});
        for (double r : rs) {
            RunConfig one = cfg;
            one.r = r;
            const AnnulusGeometry g = one.make_geometry();
            const FunctionalReport rep = functional_report(m, g);
            csv.row_mixed({format_double(r), to_string(rep.regime), format_double(rep.c),
                           format_double(rep.K_rho), format_double(rep.E_rho),
                           format_double(rep.lower_bound), format_double(rep.gap),
                           format_double(rep.quadrature_err)});
            log_info("report r=" + format_double(r) + " done");
        }
        write_output(cfg, csv.str());
        return;
    }

    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.begin_array("rows");
    for (double r : rs) {
        RunConfig one = cfg;
        one.r = r;
        const AnnulusGeometry g = one.make_geometry();
        const FunctionalReport rep = functional_report(m, g);
        w.begin_object();
        w.field("r", r);
        w.field("regime", std::string(to_string(rep.regime)));
        w.field("c", rep.c);
        w.field("K_rho", rep.K_rho);
        w.field("E_rho", rep.E_rho);
        w.field("lower_bound", rep.lower_bound);
        w.field("gap", rep.gap);
        w.field("quadrature_err", rep.quadrature_err);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_output(cfg, w.str());
}

void emit_minseq(const RunConfig& cfg, const std::string& n_list_spec) {
    const RadialMetric m = cfg.make_metric();
    const AnnulusGeometry g = cfg.make_geometry();
    std::vector<int> ns;
    std::istringstream in(n_list_spec);
    std::string item;
    while (std::getline(in, item, ',')) ns.push_back(std::stoi(item));
    if (ns.empty()) throw UsageError("minseq: empty --n-list");
    const LimitStudy study = limit_study(m, g, ns);

    if (cfg.format == "csv") {
        CsvWriter csv({"n", "s_n", "n_excess", "K_rho_n", "gap"});
        for (const LimitRow& row : study.rows)
            csv.row({static_cast<double>(row.n), row.s_n, row.n_excess, row.K_rho_n, row.gap});
        write_output(cfg, csv.str());
        return;
    }
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("metric", m.name);
    w.field("bound", study.bound);
    w.field("r_prime", study.r_prime);
    w.field("tau_log_ratio", study.tau_log_ratio);
    w.field("fitted_C", study.fitted_C);
    w.field("fitted_rate", study.fitted_rate);
    w.begin_array("rows");
    for (const LimitRow& row : study.rows) {
        w.begin_object();
        w.field("n", row.n);
        w.field("s_n", row.s_n);
        w.field("n_excess", row.n_excess);
        w.field("K_rho_n", row.K_rho_n);
        w.field("gap", row.gap);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_output(cfg, w.str());
}

std::pair<int, int> parse_mesh(const std::string& spec) {
    const auto x = spec.find('x');
    if (x == std::string::npos) throw UsageError("--mesh expects NRxNT, e.g. 64x128");
    return {std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1))};
}

void emit_verify(const RunConfig& cfg, const std::string& mode, const std::string& mesh_spec,
                 int n_nodes, int iters) {
    const RadialMetric m = cfg.make_metric();
    JsonWriter w;
    w.begin_object();
    w.field("schema_version", 1);
    w.field("mode", mode);
    w.field("metric", m.name);
    w.field("seed", static_cast<std::size_t>(cfg.seed));

    if (mode == "lepo") {
        const AnnulusGeometry g = cfg.make_geometry();
        auto prof = std::make_shared<NitscheProfile>(solve_c(m, g));
        // the solved map against its own weight: equality case of the bound
        TestMap fc;
        fc.f = [prof](double s, double t) { return std::polar(prof->q(s), t); };
        fc.f_s = [prof](double s, double t) {
            return prof->q(s) * prof->phi_prime(s) * std::polar(1.0, t);
        };
        fc.f_t = [prof](double s, double t) {
            return std::complex<double>(0, 1) * std::polar(prof->q(s), t);
        };
        auto phip = [prof](double s) { return prof->phi_prime(s); };
        const LepoReport rep = lepo_check(fc, phip, g.tau, g.sigma, 48, 48);
        w.field("max_violation_first", rep.max_violation_first);
        w.field("max_violation_second", rep.max_violation_second);
        w.field("max_equality_residual", rep.max_equality_residual);
        w.field("checked", rep.checked);
        w.field("excluded", rep.excluded);
        w.field("orientation_warning", rep.orientation_warning);
    } else if (mode == "radial-min") {
        const AnnulusGeometry g = cfg.make_geometry();
        const RadialMinResult res = radial_discrete_minimize(m, g, n_nodes);
        auto prof = std::make_shared<NitscheProfile>(solve_c(m, g));
        const ValueWithError exact = mean_distortion_radial(nitsche_map(prof, MapDirection::forward), m);
        w.field("n_nodes", n_nodes);
        w.field("c_discrete", res.c_discrete);
        w.field("c", prof->c());
        w.field("value", res.value);
        w.field("value_err", res.value_err);
        w.field("analytic", exact.value);
        w.field("analytic_err", exact.err);
        w.field("excess", res.value - exact.value);
    } else if (mode == "mesh-min") {
        const AnnulusGeometry g = cfg.make_geometry();
        const auto [n_r, n_t] = parse_mesh(mesh_spec);
        MeshState mesh = init_mesh(g, n_r, n_t);
        const MeshRunReport rep = mesh_energy_minimize(m, mesh, iters);
        w.field("mesh", mesh_spec);
        w.field("iterations", rep.iterations);
        w.field("initial_energy", rep.initial_energy);
        w.field("final_energy", rep.final_energy);
        w.field("monotone", rep.monotone);
        w.field("positive_jacobian_fraction", rep.positive_jacobian_fraction);
        w.field("stagnated", rep.stagnated);
        const RegimeVerdict v = classify_regime(m, g);
        w.field("regime", std::string(to_string(v.regime)));
        if (v.regime == Regime::fat) {
            const FunctionalReport bound = theorem2_lower_bound(m, g);
            w.field("lower_bound", bound.lower_bound);
            w.field("above_bound", rep.final_energy > bound.lower_bound);
        }
    } else if (mode == "rotation") {
        const AnnulusGeometry g = cfg.make_geometry();
        auto prof = std::make_shared<NitscheProfile>(solve_c(m, g));
        w.field("invariant", rotation_invariance_check(prof, m, cfg.seed));
    } else {
        throw UsageError("verify: unknown mode '" + mode + "' (lepo|radial-min|mesh-min|rotation)");
    }
    w.end_object();
    write_output(cfg, w.str());
}

int dispatch(int argc, char** argv) {
    CLI::App app{"extremal deformations of circular annuli under radial metrics"};
    app.require_subcommand(1);

    CommonOpts bound_o, solve_o, map_o, curv_o, reg_o, dist_o, energy_o, report_o, minseq_o,
        verify_o;

    auto* cmd_bound = app.add_subcommand("bound", "smallest admissible inner radius r*");
    add_common(cmd_bound, bound_o, false);

    auto* cmd_solve = app.add_subcommand("solve-c", "solve the profile parameter c for a target r");
    add_common(cmd_solve, solve_o, true);

    auto* cmd_map = app.add_subcommand("map-eval", "evaluate a solved map from a profile file");
    std::string profile_path, at_spec, dump_path;
    bool inverse = false;
    cmd_map->add_option("--profile", profile_path, "profile JSON written by solve-c")->required();
    cmd_map->add_option("--at", at_spec, "polar point 's,t'");
    cmd_map->add_flag("--inverse", inverse, "evaluate the inverse-direction map");
    cmd_map->add_option("--dump-profile", dump_path, "write s,phi,q,sPhiPrime,K as CSV");
    add_common(cmd_map, map_o, false);

    auto* cmd_curv = app.add_subcommand("curvature", "Gauss curvature of a metric at a radius");
    double curv_at = 0.0;
    cmd_curv->add_option("--at", curv_at, "radius")->required();
    add_common(cmd_curv, curv_o, false);

    auto* cmd_reg = app.add_subcommand("regularity", "regularity report on an annulus");
    int grid_n = 64;
    cmd_reg->add_option("--grid-n", grid_n, "sample count");
    add_common(cmd_reg, reg_o, false);

    auto* cmd_dist = app.add_subcommand("distortion", "mean distortion of a radial map");
    std::string dist_map = "nitsche";
    cmd_dist->add_option("--map", dist_map, "nitsche|critical|power:ALPHA");
    add_common(cmd_dist, dist_o, true);

    auto* cmd_energy = app.add_subcommand("energy", "weighted Dirichlet energy of an inverse map");
    std::string energy_map = "nitsche";
    cmd_energy->add_option("--map", energy_map, "nitsche|critical|power:ALPHA");
    add_common(cmd_energy, energy_o, true);

    auto* cmd_report = app.add_subcommand("report", "functional report, optionally sweeping r");
    std::string sweep;
    cmd_report->add_option("--sweep", sweep, "r=start:stop:step");
    add_common(cmd_report, report_o, true);

    auto* cmd_minseq = app.add_subcommand("minseq", "fat-regime minimizing sequence study");
    std::string n_list = "10,30,100,300,1000,3000";
    cmd_minseq->add_option("--n-list", n_list, "comma-separated exponents");
    add_common(cmd_minseq, minseq_o, true);

    auto* cmd_verify = app.add_subcommand("verify", "independent verification suites");
    std::string verify_mode, mesh_spec = "32x64";
    int n_nodes = 200, iters = 2000;
    cmd_verify->add_option("mode", verify_mode, "lepo|radial-min|mesh-min|rotation")->required();
    cmd_verify->add_option("--mesh", mesh_spec, "mesh size NRxNT");
    cmd_verify->add_option("--n-nodes", n_nodes, "radial-min node count");
    cmd_verify->add_option("--iters", iters, "mesh-min iteration cap");
    add_common(cmd_verify, verify_o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (cmd_bound->parsed()) emit_bound(resolve(bound_o));
    if (cmd_solve->parsed()) emit_solve_c(resolve(solve_o));
    if (cmd_map->parsed()) emit_map_eval(resolve(map_o), profile_path, at_spec, inverse, dump_path);
    if (cmd_curv->parsed()) emit_curvature(resolve(curv_o), curv_at);
    if (cmd_reg->parsed()) emit_regularity(resolve(reg_o), grid_n);
    if (cmd_dist->parsed()) emit_distortion(resolve(dist_o), dist_map);
    if (cmd_energy->parsed()) emit_energy(resolve(energy_o), energy_map);
    if (cmd_report->parsed()) emit_report(resolve(report_o), sweep);
    if (cmd_minseq->parsed()) emit_minseq(resolve(minseq_o), n_list);
    if (cmd_verify->parsed()) emit_verify(resolve(verify_o), verify_mode, mesh_spec, n_nodes, iters);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const EvaluationError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return 3;
    } catch (const UnboundedRootError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
