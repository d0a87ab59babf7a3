#include "qwlim/scaled_resolvent.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qwlim/errors.hpp"
#include "qwlim/lowenergy.hpp"
#include "qwlim/numeric.hpp"
#include "qwlim/quadrature.hpp"

namespace qwlim {

namespace {
using cd = std::complex<double>;
const cd I(0.0, 1.0);
} // namespace

double Probe::value(double t) const {
    return amplitude * poly_bump((t - center) / halfwidth);
}

std::vector<Probe> default_probe_battery() {
    return {{-4.0, 1.5, 1.0},
            {-1.5, 1.0, 1.0},
            {0.5, 2.0, 1.0},
            {2.0, 1.0, 1.0},
            {5.0, 1.5, 1.0}};
}

std::vector<cd> apply_scaled_resolvent(const Potential1D& potential, double eps,
                                       cd k, const UniformGrid& grid,
                                       const std::vector<double>& f, int n_quad) {
    if (!(k.imag() > 0.0)) throw std::invalid_argument("need Im k > 0");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("need eps in (0, 1]");
    if (static_cast<int>(f.size()) != grid.n)
        throw std::invalid_argument("sample count does not match the grid");

    const Quadrature q = Quadrature::midpoint(potential, n_quad);
    const UVSplit uv = uv_split(potential);
    const int N = q.size();

    std::vector<double> grid_nodes(grid.n);
    std::vector<cd> charges(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        grid_nodes[j] = grid.node(j);
        charges[j] = grid.weight(j) * f[j];
    }
    std::vector<double> scaled_nodes(N);
    for (int j = 0; j < N; ++j) scaled_nodes[j] = eps * q.nodes[j];

    // (G_k f) on the grid and at the scaled quadrature nodes
    const std::vector<cd> gf_grid = greens_sums(k, grid_nodes, grid_nodes, charges);
    const std::vector<cd> gf_scaled = greens_sums(k, scaled_nodes, grid_nodes, charges);

    // C_eps f, then T(eps k) applied to it (symmetrized coordinates)
    const cd keps = eps * k;
    Eigen::MatrixXcd A(N, N);
    for (int i = 0; i < N; ++i) {
        const double swu = std::sqrt(q.weights[i]) * uv.u(q.nodes[i]);
        for (int j = 0; j < N; ++j) {
            const double swv = std::sqrt(q.weights[j]) * uv.v(q.nodes[j]);
            A(i, j) = swu * free_kernel(keps, q.nodes[i], q.nodes[j]) * swv;
        }
        A(i, i) += 1.0;
    }
    Eigen::VectorXcd c(N);
    for (int j = 0; j < N; ++j)
        c(j) = std::sqrt(q.weights[j]) * uv.u(q.nodes[j]) * (I / (2.0 * k)) *
               gf_scaled[j];
    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(c);
    if (!x.allFinite()) throw SolverError("transition solve failed in the scaled resolvent");

    // A_eps applied to the result
    std::vector<cd> a_charges(N);
    for (int j = 0; j < N; ++j)
        a_charges[j] = uv.v(q.nodes[j]) * std::sqrt(q.weights[j]) * x(j);
    const std::vector<cd> corr = greens_sums(k, grid_nodes, scaled_nodes, a_charges);

    std::vector<cd> g(grid.n);
    for (int j = 0; j < grid.n; ++j)
        g[j] = (I / (2.0 * k)) * gf_grid[j] - (1.0 / eps) * (I / (2.0 * k)) * corr[j];
    return g;
}

std::vector<double> apply_scaled_resolvent_imag_axis(const Potential1D& potential,
                                                     double eps, double kappa,
                                                     const UniformGrid& grid,
                                                     const std::vector<double>& f,
                                                     int n_quad) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("need eps in (0, 1]");
    if (static_cast<int>(f.size()) != grid.n)
        throw std::invalid_argument("sample count does not match the grid");

    const Quadrature q = Quadrature::midpoint(potential, n_quad);
    const UVSplit uv = uv_split(potential);
    const int N = q.size();

    std::vector<double> grid_nodes(grid.n), charges(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        grid_nodes[j] = grid.node(j);
        charges[j] = grid.weight(j) * f[j];
    }
    std::vector<double> scaled_nodes(N);
    for (int j = 0; j < N; ++j) scaled_nodes[j] = eps * q.nodes[j];

    const std::vector<double> gf_grid =
        greens_sums_imag_axis(kappa, grid_nodes, grid_nodes, charges);
    const std::vector<double> gf_scaled =
        greens_sums_imag_axis(kappa, scaled_nodes, grid_nodes, charges);

    const double keps = eps * kappa;
    Eigen::MatrixXd A(N, N);
    for (int i = 0; i < N; ++i) {
        const double swu = std::sqrt(q.weights[i]) * uv.u(q.nodes[i]);
        for (int j = 0; j < N; ++j) {
            const double swv = std::sqrt(q.weights[j]) * uv.v(q.nodes[j]);
            A(i, j) = swu *
                      std::exp(-keps * std::abs(q.nodes[i] - q.nodes[j])) /
                      (2.0 * keps) * swv;
        }
        A(i, i) += 1.0;
    }
    Eigen::VectorXd c(N);
    for (int j = 0; j < N; ++j)
        c(j) = std::sqrt(q.weights[j]) * uv.u(q.nodes[j]) * gf_scaled[j] /
               (2.0 * kappa);
    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(c);
    if (!x.allFinite()) throw SolverError("transition solve failed in the scaled resolvent");

    std::vector<double> a_charges(N);
    for (int j = 0; j < N; ++j)
        a_charges[j] = uv.v(q.nodes[j]) * std::sqrt(q.weights[j]) * x(j);
    const std::vector<double> corr =
        greens_sums_imag_axis(kappa, grid_nodes, scaled_nodes, a_charges);

    std::vector<double> g(grid.n);
    for (int j = 0; j < grid.n; ++j)
        g[j] = gf_grid[j] / (2.0 * kappa) - corr[j] / (2.0 * kappa * eps);
    return g;
}

ConvergenceTable convergence_study_1d(const Potential1D& potential, double kappa,
                                      const std::vector<double>& eps_list,
                                      const std::vector<Probe>& probes,
                                      const PointInteraction& limit,
                                      const UniformGrid& grid, int n_quad,
                                      int threads) {
    if (eps_list.empty()) throw std::invalid_argument("empty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("eps list must be strictly decreasing");
    if (!(eps_list.front() <= 0.5))
        throw std::invalid_argument("eps list must lie in (0, 0.5]");

    // limit applications are eps-independent
    std::vector<std::vector<double>> limit_g(probes.size());
    std::vector<std::vector<double>> fvals(probes.size());
    std::vector<double> fnorm(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
        fvals[p].resize(grid.n);
        for (int j = 0; j < grid.n; ++j) fvals[p][j] = probes[p].value(grid.node(j));
        limit_g[p] = apply_resolvent_imag_axis(limit, kappa, grid, fvals[p]);
        fnorm[p] = grid_l2_norm(grid, fvals[p]);
    }

    ConvergenceTable table;
    table.limit_kind = limit.is_dirichlet() ? "dirichlet" : "resonant";
    table.rows.resize(eps_list.size());

    auto run_one = [&](std::size_t e) {
        double worst = 0.0;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const std::vector<double> g = apply_scaled_resolvent_imag_axis(
                potential, eps_list[e], kappa, grid, fvals[p], n_quad);
            double acc = 0.0;
            for (int j = 0; j < grid.n; ++j) {
                const double d = g[j] - limit_g[p][j];
                acc += grid.weight(j) * d * d;
            }
            worst = std::max(worst, std::sqrt(acc) / fnorm[p]);
        }
        table.rows[e] = {eps_list[e], worst};
    };

    if (threads <= 1) {
        for (std::size_t e = 0; e < eps_list.size(); ++e) run_one(e);
    } else {
        // static striping over eps indices; each slot is written once
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t e = t; e < eps_list.size();
                     e += static_cast<std::size_t>(threads))
                    run_one(e);
            });
        for (auto& th : pool) th.join();
    }

    table.monotone = true;
    for (std::size_t e = 1; e < table.rows.size(); ++e)
        if (!(table.rows[e].error < table.rows[e - 1].error)) table.monotone = false;

    std::vector<double> lx, ly;
    for (const auto& r : table.rows) {
        if (!(r.error > 0.0) || !std::isfinite(r.error)) continue;
        lx.push_back(std::log(r.eps));
        ly.push_back(std::log(r.error));
    }
    if (lx.size() >= 2) {
        const auto [slope, intercept] = fit_line(lx, ly);
        table.slope = slope;
        table.intercept = intercept;
        double res = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i)
            res = std::max(res, std::abs(ly[i] - slope * lx[i] - intercept));
        table.fit_residual = res;
    }
    return table;
}

} // namespace qwlim
