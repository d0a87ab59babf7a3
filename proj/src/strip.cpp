#include "qwlim/strip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

namespace {
using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cd>;
} // namespace

double strip_potential(const CurvatureProfile& gamma, double eps, double alpha,
                       double d, double t, double s) {
    if (!(eps > 0.0) || std::abs(s) > d)
        throw std::invalid_argument("need eps > 0 and |s| <= d");
    const double ea = std::pow(eps, alpha - 1.0);
    const double g = gamma(t / eps);
    const double g1 = gamma.derivative(t / eps);
    const double g2 = gamma.second_derivative(t / eps);
    const double den = 1.0 + ea * s * g;
    if (!(den > 0.0))
        throw HypothesisError("tube condition violated: 1 + eps^(alpha-1) s gamma "
                              "is not positive");
    const double d2 = den * den;
    return -g * g / (4.0 * d2) + ea * s * g2 / (2.0 * d2 * den) -
           1.25 * ea * ea * s * s * g1 * g1 / (d2 * d2);
}

std::vector<NormalMode> normal_modes(double eps, double alpha, double d,
                                     int s_points, int n_max) {
    if (n_max < 1) throw std::invalid_argument("need n_max >= 1");
    if (s_points < 5) throw std::invalid_argument("need at least 5 s-points");
    const int M = s_points - 2;
    const double h = 2.0 * d / (s_points - 1);
    const double scale = std::pow(eps, -2.0 * alpha);

    std::vector<NormalMode> modes;
    for (int n = 1; n <= n_max; ++n) {
        NormalMode mode;
        mode.index = n;
        mode.lambda_exact = std::pow(n * M_PI / (2.0 * std::pow(eps, alpha) * d), 2);
        const double sn = std::sin(n * M_PI * h / (4.0 * d));
        mode.lambda_discrete = scale * 4.0 / (h * h) * sn * sn;
        mode.profile.resize(M);
        for (int j = 0; j < M; ++j) {
            const double s = -d + (j + 1) * h;
            mode.profile(j) = (n % 2 == 1) ? std::cos(n * M_PI * s / (2.0 * d))
                                           : std::sin(n * M_PI * s / (2.0 * d));
        }
        mode.profile /= std::sqrt(h) * mode.profile.norm();
        modes.push_back(std::move(mode));
    }
    return modes;
}

namespace {

// fine zone over the scaled support, geometric coarsening outside, walls at -L, L
std::vector<double> build_t_grid(const CurvatureProfile& gamma, double eps,
                                 double L, const StripGridPolicy& policy) {
    const double lo = eps * (gamma.support_min() - policy.support_margin);
    const double hi = eps * (gamma.support_max() + policy.support_margin);
    if (!(L > std::max(std::abs(lo), std::abs(hi)) + 1.0))
        throw std::invalid_argument("truncation L too close to the scaled support");
    const double hf = policy.fine_step_frac * eps;

    std::vector<double> nodes;
    const int nf = std::max(4, static_cast<int>(std::ceil((hi - lo) / hf)));
    for (int j = 0; j <= nf; ++j)
        nodes.push_back(lo + (hi - lo) * j / nf);

    auto extend = [&](double from, double sign) {
        double x = from, h = hf;
        while (sign > 0 ? x < L : x > -L) {
            h = std::min(h * policy.growth, policy.coarse_step);
            double nx = x + sign * h;
            if (sign > 0 ? nx > L - 0.5 * h : nx < -L + 0.5 * h) nx = sign * L;
            nodes.push_back(nx);
            x = nx;
        }
    };
    extend(hi, +1.0);
    extend(lo, -1.0);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                nodes.end());
    return nodes;
}

} // namespace

StripOperator assemble_strip(const CurvatureProfile& gamma, double eps,
                             double alpha, double d, double L,
                             const StripGridPolicy& policy) {
    if (!(eps > 0.0) || !(d > 0.0) || !(L > 0.0))
        throw std::invalid_argument("need positive eps, d, L");
    if (gamma.kind() == CurvatureProfile::Kind::Piecewise)
        throw HypothesisError("piecewise-constant curvature is not C^2; smooth it "
                              "before assembling the strip");
    if (gamma.kind() == CurvatureProfile::Kind::Smoothed) {
        const double beta = gamma.smoothing_beta();
        if (!(beta > 3.0) || !(alpha > 2.5 + 1.5 * beta))
            throw HypothesisError("smoothed curvature needs beta > 3 and "
                                  "alpha > 5/2 + 3 beta/2");
    } else if (!(alpha > 2.5)) {
        throw HypothesisError("the collapse regime needs alpha > 5/2");
    }
    const double ea = std::pow(eps, alpha - 1.0);
    if (!(ea * gamma.sup_abs() * d < 1.0))
        throw HypothesisError("tube condition violated: eps^(alpha-1) sup|gamma| d "
                              "must stay below 1");

    StripOperator op;
    op.eps = eps;
    op.alpha = alpha;
    op.d = d;
    op.L = L;
    op.gamma = gamma;

    const std::vector<double> full = build_t_grid(gamma, eps, L, policy);
    op.t_nodes.assign(full.begin() + 1, full.end() - 1);
    const int nt = op.nt();
    op.t_cell.resize(nt);
    for (int i = 0; i < nt; ++i)
        op.t_cell[i] = 0.5 * (full[i + 2] - full[i]);

    const int M = policy.s_points - 2;
    op.h_s = 2.0 * d / (policy.s_points - 1);
    op.s_nodes.resize(M);
    for (int j = 0; j < M; ++j) op.s_nodes[j] = -d + (j + 1) * op.h_s;

    const double trans = std::pow(eps, -2.0 * alpha);
    const double inv_eps2 = 1.0 / (eps * eps);

    auto weight = [&](double t, double s) {
        const double den = 1.0 + ea * s * gamma(t / eps);
        if (!(den > 0.0))
            throw HypothesisError("tube condition violated inside the strip");
        return 1.0 / (den * den);
    };

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(nt) * M * 5);
    auto idx = [&](int i, int j) { return i * M + j; };

    for (int i = 0; i < nt; ++i) {
        const double t = op.t_nodes[i];
        const double h_left = full[i + 1] - full[i];
        const double h_right = full[i + 2] - full[i + 1];
        const double t_left = 0.5 * (full[i] + full[i + 1]);
        const double t_right = 0.5 * (full[i + 1] + full[i + 2]);
        const double cell = op.t_cell[i];
        for (int j = 0; j < M; ++j) {
            const double s = op.s_nodes[j];
            const double wl = weight(t_left, s);
            const double wr = weight(t_right, s);
            double diag = (wl / h_left + wr / h_right) / cell;
            diag += 2.0 / (op.h_s * op.h_s) * trans;
            diag += inv_eps2 * strip_potential(gamma, eps, alpha, d, t, s);
            trips.emplace_back(idx(i, j), idx(i, j), diag);
            if (i + 1 < nt) {
                const double off =
                    -wr / (h_right * std::sqrt(cell * op.t_cell[i + 1]));
                trips.emplace_back(idx(i, j), idx(i + 1, j), off);
                trips.emplace_back(idx(i + 1, j), idx(i, j), off);
            }
            if (j + 1 < M) {
                const double off = -trans / (op.h_s * op.h_s);
                trips.emplace_back(idx(i, j), idx(i, j + 1), off);
                trips.emplace_back(idx(i, j + 1), idx(i, j), off);
            }
        }
    }
    op.A.resize(nt * M, nt * M);
    op.A.setFromTriplets(trips.begin(), trips.end());
    return op;
}

StripResolvent::StripResolvent(const StripOperator& op, int m, cd k)
    : op_(&op), m_(m) {
    if (k == cd(0.0, 0.0)) throw std::invalid_argument("need k != 0");
    const int M = op.ns();
    modes_ = normal_modes(op.eps, op.alpha, op.d, M + 2, std::max(2, m));
    lambda_m_ = modes_[m - 1].lambda_discrete;

    const cd z = k * k + lambda_m_;
    SpMatC S = op.A.cast<cd>();
    for (int r = 0; r < S.rows(); ++r) S.coeffRef(r, r) -= z;
    S.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<SpMatC>>();
    lu_->compute(S);
    if (lu_->info() != Eigen::Success)
        throw SolverError("sparse factorization of the shifted strip operator failed");
}

Eigen::VectorXcd StripResolvent::matrix_element(int n,
                                                const std::vector<double>& f_on_t) const {
    const StripOperator& op = *op_;
    const int nt = op.nt(), M = op.ns();
    if (static_cast<int>(f_on_t.size()) != nt)
        throw std::invalid_argument("source sample count does not match the t-grid");
    if (n < 1 || n > static_cast<int>(modes_.size()))
        throw std::invalid_argument("mode index out of range");

    const Eigen::VectorXd& pm = modes_[m_ - 1].profile;
    const Eigen::VectorXd& pn = modes_[n - 1].profile;

    Eigen::VectorXcd rhs(nt * M);
    for (int i = 0; i < nt; ++i) {
        const double sc = std::sqrt(op.t_cell[i] * op.h_s) * f_on_t[i];
        for (int j = 0; j < M; ++j) rhs(i * M + j) = sc * pm(j);
    }
    const Eigen::VectorXcd x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success)
        throw SolverError("sparse solve of the shifted strip operator failed");

    Eigen::VectorXcd g(nt);
    for (int i = 0; i < nt; ++i) {
        cd acc = 0.0;
        for (int j = 0; j < M; ++j) acc += pn(j) * x(i * M + j);
        g(i) = acc * std::sqrt(op.h_s / op.t_cell[i]);
    }
    return g;
}

namespace {

// limit-resolvent application evaluated at the (sorted) strip t-nodes
std::vector<cd> limit_apply_at(const PointInteraction& limit, cd k,
                               const Probe& probe,
                               const std::vector<double>& targets) {
    const UniformGrid src = UniformGrid::over(probe.center - probe.halfwidth,
                                              probe.center + probe.halfwidth, 5e-4);
    std::vector<double> f(src.n);
    for (int j = 0; j < src.n; ++j) f[j] = probe.value(src.node(j));
    return apply_resolvent(limit, k, src, f, targets);
}

struct EpsOutcome {
    double diag_error = 0.0;
    double control_error = 0.0;
    double offdiag_norm = 0.0;
};

EpsOutcome run_eps_point(const CurvatureProfile& gamma, double eps,
                         const std::vector<Probe>& probes,
                         const PointInteraction& limit,
                         const PointInteraction* control,
                         const Strip2DOptions& opt, double L,
                         const StripGridPolicy& policy, bool offdiag) {
    const StripOperator op = assemble_strip(gamma, eps, opt.alpha, opt.d, L, policy);
    const int nt = op.nt();

    std::vector<std::vector<double>> fvals(probes.size());
    std::vector<double> fnorm(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
        fvals[p].resize(nt);
        double acc = 0.0;
        for (int i = 0; i < nt; ++i) {
            fvals[p][i] = probes[p].value(op.t_nodes[i]);
            acc += op.t_cell[i] * fvals[p][i] * fvals[p][i];
        }
        fnorm[p] = std::sqrt(acc);
    }

    EpsOutcome out;
    {
        const StripResolvent solve1(op, 1, opt.k);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const Eigen::VectorXcd g = solve1.matrix_element(1, fvals[p]);
            const std::vector<cd> ref = limit_apply_at(limit, opt.k, probes[p], op.t_nodes);
            double err = 0.0, cerr = 0.0;
            if (control) {
                const std::vector<cd> cref =
                    limit_apply_at(*control, opt.k, probes[p], op.t_nodes);
                for (int i = 0; i < nt; ++i)
                    cerr += op.t_cell[i] * std::norm(g(i) - cref[i]);
            }
            for (int i = 0; i < nt; ++i)
                err += op.t_cell[i] * std::norm(g(i) - ref[i]);
            out.diag_error = std::max(out.diag_error, std::sqrt(err) / fnorm[p]);
            if (control)
                out.control_error = std::max(out.control_error, std::sqrt(cerr) / fnorm[p]);
        }
    }
    if (offdiag) {
        const StripResolvent solve2(op, 2, opt.k);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const Eigen::VectorXcd g = solve2.matrix_element(1, fvals[p]);
            double nrm = 0.0;
            for (int i = 0; i < nt; ++i) nrm += op.t_cell[i] * std::norm(g(i));
            out.offdiag_norm = std::max(out.offdiag_norm, std::sqrt(nrm) / fnorm[p]);
        }
    }
    return out;
}

} // namespace

Strip2DResult convergence_study_2d(const CurvatureProfile& gamma,
                                   const std::vector<Probe>& probes,
                                   const PointInteraction& limit,
                                   const PointInteraction& control_limit,
                                   const Strip2DOptions& opt) {
    if (opt.eps_list.empty()) throw std::invalid_argument("empty eps list");
    for (std::size_t i = 1; i < opt.eps_list.size(); ++i)
        if (!(opt.eps_list[i] < opt.eps_list[i - 1]))
            throw std::invalid_argument("eps list must be strictly decreasing");
    if (probes.empty()) throw std::invalid_argument("need at least one probe");
    if (!(opt.k.imag() > 0.0)) throw std::invalid_argument("need Im k > 0");

    double extent = 0.0;
    for (const auto& p : probes)
        extent = std::max(extent, std::abs(p.center) + p.halfwidth);
    const double eps_max = opt.eps_list.front();
    const double supp =
        eps_max * std::max(std::abs(gamma.support_min()), std::abs(gamma.support_max()));
    const double L = std::max(extent, supp) + opt.decay_headroom / opt.k.imag();

    Strip2DResult result;
    result.L = L;
    result.diagonal.limit_kind = limit.is_dirichlet() ? "dirichlet" : "resonant";
    result.control.limit_kind =
        control_limit.is_dirichlet() ? "dirichlet" : "resonant";
    result.diagonal.rows.resize(opt.eps_list.size());
    result.control.rows.resize(opt.eps_list.size());
    result.offdiagonal.resize(opt.eps_list.size());

    auto run_index = [&](std::size_t e) {
        const auto tic = std::chrono::steady_clock::now();
        const double eps = opt.eps_list[e];
        const EpsOutcome oc = run_eps_point(
            gamma, eps, probes, limit,
            opt.negative_control ? &control_limit : nullptr, opt, L, opt.policy,
            /*offdiag=*/true);
        result.diagonal.rows[e] = {eps, oc.diag_error};
        result.control.rows[e] = {eps, oc.control_error};
        result.offdiagonal[e] = {eps, oc.offdiag_norm};

        if (opt.verbose) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - tic)
                    .count();
            std::printf("  eps %.4g: diag %.6e offdiag %.6e control %.6e (%.1f s)\n",
                        eps, oc.diag_error, oc.offdiag_norm, oc.control_error, secs);
            std::fflush(stdout);
        }
    };
    if (opt.threads <= 1) {
        for (std::size_t e = 0; e < opt.eps_list.size(); ++e) run_index(e);
    } else {
        // static striping over eps indices; each slot is written once
        std::vector<std::thread> pool;
        for (int t = 0; t < opt.threads; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t e = t; e < opt.eps_list.size();
                     e += static_cast<std::size_t>(opt.threads))
                    run_index(e);
            });
        for (auto& th : pool) th.join();
    }

    auto finish_table = [](ConvergenceTable& t) {
        t.monotone = true;
        for (std::size_t e = 1; e < t.rows.size(); ++e)
            if (!(t.rows[e].error < t.rows[e - 1].error)) t.monotone = false;
        std::vector<double> lx, ly;
        for (const auto& r : t.rows)
            if (r.error > 0.0 && std::isfinite(r.error)) {
                lx.push_back(std::log(r.eps));
                ly.push_back(std::log(r.error));
            }
        if (lx.size() >= 2) {
            const auto [slope, intercept] = fit_line(lx, ly);
            t.slope = slope;
            t.intercept = intercept;
            for (std::size_t i = 0; i < lx.size(); ++i)
                t.fit_residual = std::max(
                    t.fit_residual, std::abs(ly[i] - slope * lx[i] - intercept));
        }
    };
    finish_table(result.diagonal);
    finish_table(result.control);

    // discretization must stay subdominant: halve both steps at finest eps
    if (opt.refinement_check) {
        const double eps = opt.eps_list.back();
        StripGridPolicy fine = opt.policy;
        fine.fine_step_frac *= 0.5;
        fine.coarse_step *= 0.5;
        fine.s_points = 2 * (opt.policy.s_points - 1) + 1;
        const EpsOutcome fine_oc = run_eps_point(gamma, eps, {probes[0]}, limit,
                                                 nullptr, opt, L, fine,
                                                 /*offdiag=*/false);
        const EpsOutcome coarse_oc = run_eps_point(gamma, eps, {probes[0]}, limit,
                                                   nullptr, opt, L, opt.policy,
                                                   /*offdiag=*/false);
        result.refinement_delta =
            std::abs(fine_oc.diag_error - coarse_oc.diag_error) / coarse_oc.diag_error;
    }

    if (opt.truncation_check) {
        const double eps = opt.eps_list.back();
        const EpsOutcome wide = run_eps_point(gamma, eps, {probes[0]}, limit, nullptr,
                                              opt, 1.5 * L, opt.policy,
                                              /*offdiag=*/false);
        const EpsOutcome base = run_eps_point(gamma, eps, {probes[0]}, limit, nullptr,
                                              opt, L, opt.policy, /*offdiag=*/false);
        result.truncation_delta =
            std::abs(wide.diag_error - base.diag_error) / base.diag_error;
    }

    return result;
}

} // namespace qwlim
