#include "qwlim/runners.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/io.hpp"
#include "qwlim/scaled_resolvent.hpp"
#include "qwlim/shooting.hpp"
#include "qwlim/strip.hpp"

namespace qwlim {

namespace {

using io::Json;

void require_schema(const Json& config) {
    if (!config.contains("schema") || config["schema"] != 1)
        throw std::invalid_argument("config must carry \"schema\": 1");
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// "potential" or "curvature" input block
Potential1D input_potential(const Json& config) {
    if (config.contains("potential"))
        return io::potential_from_json(config["potential"]);
    if (config.contains("curvature"))
        return Potential1D::from_curvature(
            io::curvature_from_json(config["curvature"]));
    throw std::invalid_argument("config needs a 'potential' or 'curvature' block");
}

std::vector<Probe> probes_from_config(const Json& config) {
    if (!config.contains("probes")) return default_probe_battery();
    std::vector<Probe> probes;
    for (const auto& p : config["probes"])
        probes.push_back({p.at("center").get<double>(),
                          p.at("halfwidth").get<double>(),
                          p.value("amplitude", 1.0)});
    if (probes.empty()) throw std::invalid_argument("empty probe list");
    return probes;
}

double imag_axis_kappa(const Json& config) {
    double re = 0.0, im = 1.0;
    if (config.contains("k")) {
        re = config["k"].at(0).get<double>();
        im = config["k"].at(1).get<double>();
    }
    if (re != 0.0 || !(im > 0.0))
        throw std::invalid_argument(
            "convergence studies run at k = i kappa on the positive imaginary axis");
    return im;
}

// limit operator from the detected resonance, normalized constants
PointInteraction limit_from_potential(const Potential1D& pot, int n_nodes,
                                      ResonanceReport* report_out = nullptr) {
    const ResonanceReport rep = detect_resonance(pot, n_nodes);
    if (report_out) *report_out = rep;
    if (!rep.resonant) return PointInteraction::dirichlet();
    const double n = std::hypot(rep.c1, rep.c2);
    return PointInteraction::resonant(rep.c1 / n, rep.c2 / n);
}

void run_resonance(const Json& config, const std::string& out_dir,
                   const RunOptions&) {
    const Potential1D pot = input_potential(config);
    const int N = config.value("N", 1601);
    const ResonanceReport rep = detect_resonance(pot, N);
    io::write_json_file(out_path(out_dir, "report.json"),
                        io::resonance_report_to_json(rep));
    if (config.value("dump_phi0", false) && rep.resonant) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < rep.n_nodes; ++i)
            rows.push_back({rep.quadrature.nodes[i], rep.phi0(i)});
        io::write_csv_file(out_path(out_dir, "phi0.csv"), {"t", "phi0"}, rows);
    }
    if (config.value("require_resonant", false) && !rep.resonant)
        throw NotResonantError("input potential has no zero-energy resonance");
}

void run_scan(const Json& config, const std::string& out_dir, const RunOptions&) {
    const std::string family = config.at("family").get<std::string>();
    const double from = config.at("from").get<double>();
    const double to = config.at("to").get<double>();
    const int points = config.value("points", 101);
    if (points < 2 || !(to > from)) throw std::invalid_argument("empty sweep");
    const bool refine = config.value("refine", true);

    std::function<Potential1D(double)> make;
    if (family == "well-depth") {
        const double b = config.value("b", 1.0);
        make = [b](double a) { return Potential1D::single_well(a, b); };
    } else if (family == "triple-a1") {
        const double a2 = config.at("a2").get<double>();
        const double a3 = config.at("a3").get<double>();
        std::array<double, 3> b{};
        for (int i = 0; i < 3; ++i) b[i] = config.at("b").at(i).get<double>();
        make = [=](double a1) {
            return Potential1D::triple_well({a1, a2, a3}, b);
        };
    } else if (family == "bump-amplitude") {
        const double lo = config.at("support").at(0).get<double>();
        const double hi = config.at("support").at(1).get<double>();
        const bool odd = config.value("shape", std::string("even")) == "odd";
        make = [=](double A) {
            return Potential1D::from_curvature(CurvatureProfile::bump(
                A, lo, hi, odd ? BumpShape::Odd : BumpShape::Even));
        };
    } else {
        throw std::invalid_argument("unknown scan family '" + family + "'");
    }

    std::vector<double> params(points), margins(points);
    double scale = 0.0;
    for (int i = 0; i < points; ++i) {
        params[i] = from + (to - from) * i / (points - 1);
        margins[i] = resonance_margin(make(params[i]));
        scale = std::max(scale, std::abs(margins[i]));
    }
    std::vector<double> roots;
    if (refine)
        for (int i = 1; i < points; ++i)
            if ((margins[i - 1] > 0.0) != (margins[i] > 0.0))
                roots.push_back(
                    tune_to_resonance(make, params[i - 1], params[i]));

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < points; ++i)
        rows.push_back({params[i], margins[i],
                        std::abs(margins[i]) <= 1e-8 * std::max(1.0, scale) ? 1.0 : 0.0});
    io::write_csv_file(out_path(out_dir, "scan.csv"),
                       {"parameter", "margin", "resonant_flag"}, rows);

    Json summary;
    summary["schema"] = 1;
    summary["family"] = family;
    summary["roots"] = roots;
    io::write_json_file(out_path(out_dir, "scan.json"), summary);
}

void run_limit_op(const Json& config, const std::string& out_dir,
                  const RunOptions&) {
    const Potential1D pot = input_potential(config);
    const int N = config.value("N", 1601);
    const PointInteraction op = limit_from_potential(pot, N);
    io::write_json_file(out_path(out_dir, "pointop.json"), io::pointop_to_json(op));

    const ScatteringData s = scattering_matrix(op);
    std::vector<std::vector<double>> rows;
    for (double p : {0.5, 1.0, 2.0, 5.0})
        rows.push_back({p, s.transmission, 0.0, s.reflection_plus});
    io::write_csv_file(out_path(out_dir, "scattering.csv"),
                       {"p", "ReT", "ImT", "R_plus"}, rows);
}

void run_converge_1d(const Json& config, const std::string& out_dir,
                     const RunOptions& options) {
    const Potential1D pot = input_potential(config);
    const double kappa = imag_axis_kappa(config);
    std::vector<double> eps_list;
    for (const auto& e : config.at("eps_list")) eps_list.push_back(e.get<double>());
    const int n_quad = config.value("n_quad", 801);

    double t_min = -10.0, t_max = 10.0, step = 1e-3;
    if (config.contains("grid")) {
        t_min = config["grid"].value("t_min", t_min);
        t_max = config["grid"].value("t_max", t_max);
        step = config["grid"].value("step", step);
    }
    const UniformGrid grid = UniformGrid::over(t_min, t_max, step);
    const std::vector<Probe> probes = probes_from_config(config);

    PointInteraction limit = PointInteraction::dirichlet();
    if (config.contains("limit") && config["limit"].is_object() &&
        config["limit"].value("kind", std::string("auto")) != "auto")
        limit = io::pointop_from_json(config["limit"]);
    else
        limit = limit_from_potential(pot, std::max(801, n_quad));

    const ConvergenceTable table = convergence_study_1d(
        pot, kappa, eps_list, probes, limit, grid, n_quad, options.threads);

    std::vector<std::vector<double>> rows;
    for (const auto& r : table.rows) rows.push_back({r.eps, r.error});
    io::write_csv_file(out_path(out_dir, "table.csv"), {"eps", "error"}, rows);

    Json summary;
    summary["schema"] = 1;
    summary["slope"] = table.slope;
    summary["intercept"] = table.intercept;
    summary["limit_kind"] = table.limit_kind;
    summary["monotone"] = table.monotone;

    if (config.value("negative_control", false)) {
        const PointInteraction wrong =
            limit.is_dirichlet() ? PointInteraction::resonant(0.0, 1.0)
                                 : PointInteraction::dirichlet();
        const ConvergenceTable control = convergence_study_1d(
            pot, kappa, eps_list, probes, wrong, grid, n_quad, options.threads);
        std::vector<std::vector<double>> crows;
        for (const auto& r : control.rows) crows.push_back({r.eps, r.error});
        io::write_csv_file(out_path(out_dir, "control.csv"), {"eps", "error"}, crows);
        summary["control_first"] = control.rows.front().error;
        summary["control_last"] = control.rows.back().error;
    }
    io::write_json_file(out_path(out_dir, "summary.json"), summary);
}

void run_converge_2d(const Json& config, const std::string& out_dir,
                     const RunOptions& options) {
    if (!config.contains("curvature"))
        throw std::invalid_argument("converge-2d needs a 'curvature' block");
    const CurvatureProfile gamma = io::curvature_from_json(config["curvature"]);

    Strip2DOptions opt;
    opt.alpha = config.value("alpha", 3.0);
    opt.d = config.value("d", 1.0);
    if (config.contains("k"))
        opt.k = std::complex<double>(config["k"].at(0).get<double>(),
                                     config["k"].at(1).get<double>());
    for (const auto& e : config.at("eps_list"))
        opt.eps_list.push_back(e.get<double>());
    if (config.contains("grid_policy")) {
        const Json& g = config["grid_policy"];
        opt.policy.fine_step_frac = g.value("fine_step_frac", opt.policy.fine_step_frac);
        opt.policy.coarse_step = g.value("coarse_step", opt.policy.coarse_step);
        opt.policy.growth = g.value("growth", opt.policy.growth);
        opt.policy.s_points = g.value("s_points", opt.policy.s_points);
        opt.policy.support_margin =
            g.value("support_margin", opt.policy.support_margin);
    }
    if (config.contains("L_policy"))
        opt.decay_headroom =
            config["L_policy"].value("headroom", opt.decay_headroom);
    opt.refinement_check = config.value("refinement_check", true);
    opt.truncation_check = config.value("truncation_check", false);
    opt.negative_control = config.value("negative_control", true);
    opt.threads = options.threads;
    opt.verbose = options.verbose;

    std::vector<Probe> probes;
    if (config.contains("probes"))
        probes = probes_from_config(config);
    else
        probes = {{-2.5, 1.5, 1.0}, {0.5, 2.0, 1.0}, {4.0, 1.5, 1.0}};

    // limit from the effective potential of the curvature
    const Potential1D pot = Potential1D::from_curvature(gamma);
    PointInteraction limit = PointInteraction::dirichlet();
    if (config.contains("limit") && config["limit"].is_object() &&
        config["limit"].value("kind", std::string("auto")) != "auto")
        limit = io::pointop_from_json(config["limit"]);
    else
        limit = limit_from_potential(pot, config.value("N", 1201));
    const PointInteraction control = limit.is_dirichlet()
                                         ? PointInteraction::resonant(0.0, 1.0)
                                         : PointInteraction::dirichlet();

    const Strip2DResult result =
        convergence_study_2d(gamma, probes, limit, control, opt);

    std::vector<std::vector<double>> rows;
    for (std::size_t e = 0; e < result.diagonal.rows.size(); ++e)
        rows.push_back({result.diagonal.rows[e].eps, result.diagonal.rows[e].error,
                        result.offdiagonal[e].error,
                        result.control.rows[e].error});
    io::write_csv_file(out_path(out_dir, "table2d.csv"),
                       {"eps", "diag_error", "offdiag_norm", "control_error"}, rows);

    Json summary;
    summary["schema"] = 1;
    summary["limit_kind"] = result.diagonal.limit_kind;
    summary["slope"] = result.diagonal.slope;
    summary["monotone"] = result.diagonal.monotone;
    summary["offdiag_first"] = result.offdiagonal.front().error;
    summary["offdiag_last"] = result.offdiagonal.back().error;
    summary["offdiag_halved"] =
        result.offdiagonal.front().error >= 2.0 * result.offdiagonal.back().error;
    summary["control_first"] = result.control.rows.front().error;
    summary["control_last"] = result.control.rows.back().error;
    summary["control_above_diag"] =
        result.control.rows.back().error > result.diagonal.rows.back().error;
    summary["refinement_delta"] = result.refinement_delta;
    summary["truncation_delta"] = result.truncation_delta;
    summary["L"] = result.L;
    io::write_json_file(out_path(out_dir, "summary2d.json"), summary);
}

void run_curve(const Json& config, const std::string& out_dir, const RunOptions&) {
    if (!config.contains("curvature"))
        throw std::invalid_argument("curve needs a 'curvature' block");
    const CurvatureProfile gamma = io::curvature_from_json(config["curvature"]);
    double t0 = gamma.support_min() - 1.0, t1 = gamma.support_max() + 1.0;
    if (config.contains("range")) {
        t0 = config["range"].at(0).get<double>();
        t1 = config["range"].at(1).get<double>();
    }
    const double step = config.value("step", 1e-3);
    const Polyline poly = reconstruct_curve(gamma, t0, t1, step);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < poly.size(); ++i)
        rows.push_back({poly.t[i], poly.x[i], poly.y[i], poly.angle[i]});
    io::write_csv_file(out_path(out_dir, "polyline.csv"), {"t", "x", "y", "angle"},
                       rows);

    const auto crossing = first_self_intersection(poly);
    Json j;
    j["schema"] = 1;
    j["theta"] = gamma.total_angle();
    j["self_intersects"] = crossing.has_value();
    if (crossing) {
        j["crossing_segments"] =
            Json::array({crossing->seg_a, crossing->seg_b});
    }
    io::write_json_file(out_path(out_dir, "curve.json"), j);
}

void run_evolve(const Json& config, const std::string& out_dir,
                const RunOptions&) {
    if (!config.contains("op"))
        throw std::invalid_argument("evolve needs an 'op' block");
    const PointInteraction op = io::pointop_from_json(config["op"]);

    GaussianPacket packet;
    if (config.contains("packet")) {
        packet.center = config["packet"].value("center", -8.0);
        packet.momentum = config["packet"].value("momentum", 8.0);
        packet.width = config["packet"].value("width", 1.5);
    }
    double L = 40.0, step = 0.01;
    if (config.contains("grid")) {
        L = config["grid"].value("L", L);
        step = config["grid"].value("step", step);
    }
    const double quad_step = config.value("quad_step", 1e-3);
    std::vector<double> times;
    for (const auto& t : config.at("times")) times.push_back(t.get<double>());

    // origin at a cell center: the wavefunction jumps there and the
    // trapezoid norm stays second order only without a node on the jump
    const UniformGrid grid = UniformGrid::symmetric_staggered(L, step);
    Json norms = Json::array();
    double drift = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
        const std::vector<std::complex<double>> psi =
            evolve_packet(op, packet, times[s], grid, quad_step);
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < grid.n; ++i)
            rows.push_back({grid.node(i), psi[i].real(), psi[i].imag(),
                            std::norm(psi[i])});
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%02zu.csv", s);
        io::write_csv_file(out_path(out_dir, name), {"x", "re", "im", "abs2"}, rows);
        const double norm = grid_l2_norm(grid, psi);
        norms.push_back(norm);
        drift = std::max(drift, std::abs(norm - 1.0));
    }
    Json j;
    j["schema"] = 1;
    j["times"] = times;
    j["norms"] = norms;
    j["max_norm_drift"] = drift;
    io::write_json_file(out_path(out_dir, "evolve.json"), j);
}

} // namespace

void run_command(const std::string& command, const std::string& config_text,
                 const std::string& out_dir, const RunOptions& options) {
    const Json config = io::parse_json_text(config_text);
    require_schema(config);
    std::filesystem::create_directories(out_dir);

    if (command == "resonance") return run_resonance(config, out_dir, options);
    if (command == "scan") return run_scan(config, out_dir, options);
    if (command == "limit-op") return run_limit_op(config, out_dir, options);
    if (command == "converge-1d") return run_converge_1d(config, out_dir, options);
    if (command == "converge-2d") return run_converge_2d(config, out_dir, options);
    if (command == "curve") return run_curve(config, out_dir, options);
    if (command == "evolve") return run_evolve(config, out_dir, options);
    throw std::invalid_argument("unknown command '" + command + "'");
}

} // namespace qwlim
