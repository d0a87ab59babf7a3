#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"
#include "qwlim/shooting.hpp"
#include "qwlim/strip.hpp"

using namespace qwlim;
using cd = std::complex<double>;

namespace {

// independently coded long-double route for the strip potential
long double strip_potential_reference(const CurvatureProfile& gamma, long double eps,
                                      long double alpha, long double t,
                                      long double s) {
    const long double g = gamma(static_cast<double>(t / eps));
    const long double g1 = gamma.derivative(static_cast<double>(t / eps));
    const long double g2 = gamma.second_derivative(static_cast<double>(t / eps));
    const long double ea = std::pow(eps, alpha - 1.0L);
    const long double D = 1.0L + ea * s * g;
    return -(g * g) / (4.0L * D * D) + ea * s * g2 / (2.0L * D * D * D) -
           (5.0L / 4.0L) * ea * ea * s * s * g1 * g1 / (D * D * D * D);
}

StripGridPolicy coarse_policy() {
    StripGridPolicy p;
    p.fine_step_frac = 1.0 / 20.0;
    p.coarse_step = 0.1;
    p.growth = 1.3;
    p.s_points = 21;
    return p;
}

} // namespace

TEST_CASE("strip potential closed form") {
    const auto gamma = CurvatureProfile::bump(2.0, -1.0, 1.0, BumpShape::Odd);
    SUBCASE("s = 0 collapses to -gamma^2/4") {
        for (double t : {-0.3, 0.1, 0.4}) {
            const double g = gamma(t / 0.5);
            CHECK(strip_potential(gamma, 0.5, 3.0, 1.0, t, 0.0) ==
                  doctest::Approx(-g * g / 4.0).epsilon(1e-15));
        }
    }
    SUBCASE("vanishing curvature gives zero") {
        const auto flat = CurvatureProfile::bump(0.0, -1.0, 1.0);
        CHECK(strip_potential(flat, 0.5, 3.0, 1.0, 0.2, 0.7) == 0.0);
    }
    SUBCASE("generic points match an independent high-precision route") {
        for (double t : {-0.42, 0.17, 0.33})
            for (double s : {-0.9, 0.25, 0.8}) {
                const double mine = strip_potential(gamma, 0.5, 3.0, 1.0, t, s);
                const double ref = static_cast<double>(
                    strip_potential_reference(gamma, 0.5L, 3.0L, t, s));
                CHECK(mine == doctest::Approx(ref).epsilon(1e-14));
            }
    }
    SUBCASE("unscaled form at eps = alpha = 1") {
        const double t = 0.3, s = 0.4;
        const double g = gamma(t), g1 = gamma.derivative(t),
                     g2 = gamma.second_derivative(t);
        const double D = 1.0 + s * g;
        const double expected = -g * g / (4.0 * D * D) + s * g2 / (2.0 * D * D * D) -
                                1.25 * s * s * g1 * g1 / std::pow(D, 4);
        CHECK(strip_potential(gamma, 1.0, 1.0, 1.0, t, s) ==
              doctest::Approx(expected).epsilon(1e-15));
    }
    SUBCASE("tube violation throws") {
        const auto strong = CurvatureProfile::bump(9.0, -1.0, 1.0);
        CHECK_THROWS_AS(strip_potential(strong, 1.0, 1.0, 1.0, 0.0, -0.9),
                        HypothesisError);
    }
}

TEST_CASE("normal modes") {
    SUBCASE("exact eigenvalue formula") {
        const auto modes = normal_modes(1.0, 1.0, M_PI / 2.0, 41, 2);
        CHECK(modes[0].lambda_exact == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(modes[1].lambda_exact == doctest::Approx(4.0).epsilon(1e-15));
    }
    SUBCASE("gap grows like eps^(-2 alpha)") {
        const double d = 1.0, alpha = 3.0;
        for (double eps : {0.5, 0.25}) {
            const auto modes = normal_modes(eps, alpha, d, 41, 2);
            const double gap = modes[1].lambda_exact - modes[0].lambda_exact;
            CHECK(gap == doctest::Approx(3.0 * std::pow(M_PI / (2.0 * d), 2) *
                                         std::pow(eps, -2.0 * alpha))
                             .epsilon(1e-12));
        }
    }
    SUBCASE("discrete orthonormality is exact") {
        const auto modes = normal_modes(0.7, 3.0, 1.0, 41, 4);
        const double h = 2.0 / 40.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double ip = h * modes[a].profile.dot(modes[b].profile);
                CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-13));
            }
    }
    SUBCASE("discrete eigenvalue matches a dense eigensolve of the s-block") {
        const double eps = 0.6, alpha = 3.0, d = 1.0;
        const int sp = 21, M = sp - 2;
        const double h = 2.0 * d / (sp - 1);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(M, M);
        const double scale = std::pow(eps, -2.0 * alpha);
        for (int i = 0; i < M; ++i) {
            block(i, i) = 2.0 / (h * h) * scale;
            if (i + 1 < M) {
                block(i, i + 1) = -scale / (h * h);
                block(i + 1, i) = -scale / (h * h);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        const auto modes = normal_modes(eps, alpha, d, sp, 2);
        CHECK(modes[0].lambda_discrete ==
              doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
        CHECK(modes[1].lambda_discrete ==
              doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
        // discrete eigenvalue approaches the continuum one at grid order
        CHECK(std::abs(modes[0].lambda_discrete - modes[0].lambda_exact) /
                  modes[0].lambda_exact <
              std::pow(M_PI * h / (2.0 * d), 2));
    }
}

TEST_CASE("assembly is exactly symmetric and validated") {
    const auto gamma = CurvatureProfile::bump(2.0, -1.0, 1.0, BumpShape::Odd);
    SUBCASE("symmetry at the matrix level") {
        const StripOperator op =
            assemble_strip(gamma, 0.5, 3.0, 1.0, 10.0, coarse_policy());
        const Eigen::SparseMatrix<double> diff =
            Eigen::SparseMatrix<double>(op.A.transpose()) - op.A;
        CHECK(diff.coeffs().cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("piecewise curvature must be smoothed first") {
        const auto pw = CurvatureProfile::piecewise({{1.0, 0.0, 1.0}});
        CHECK_THROWS_AS(assemble_strip(pw, 0.5, 3.0, 1.0, 10.0, coarse_policy()),
                        HypothesisError);
    }
    SUBCASE("alpha bound for smooth curvature") {
        CHECK_THROWS_AS(assemble_strip(gamma, 0.5, 2.0, 1.0, 10.0, coarse_policy()),
                        HypothesisError);
    }
    SUBCASE("smoothed curvature needs the stronger exponents") {
        const auto base = CurvatureProfile::piecewise({{1.0, 0.0, 1.0}});
        const auto sm = smooth_curvature(base, 0.3, 3.5);
        CHECK_THROWS_AS(assemble_strip(sm, 0.3, 3.0, 1.0, 10.0, coarse_policy()),
                        HypothesisError); // alpha must exceed 5/2 + 3 beta/2
        const StripOperator ok =
            assemble_strip(sm, 0.3, 8.0, 1.0, 10.0, coarse_policy());
        CHECK(ok.nt() > 0);
    }
    SUBCASE("tube condition at assembly") {
        const auto strong = CurvatureProfile::bump(40.0, -1.0, 1.0);
        CHECK_THROWS_AS(assemble_strip(strong, 0.9, 3.0, 1.0, 10.0, coarse_policy()),
                        HypothesisError);
    }
}

TEST_CASE("straight strip separates exactly") {
    const auto flat = CurvatureProfile::bump(0.0, -1.0, 1.0);
    const StripOperator op = assemble_strip(flat, 0.5, 3.0, 1.0, 13.0, coarse_policy());
    const cd k(0.0, 1.0);
    const Probe probe{0.0, 1.5, 1.0};
    std::vector<double> f(op.nt());
    for (int i = 0; i < op.nt(); ++i) f[i] = probe.value(op.t_nodes[i]);

    const StripResolvent solve(op, 1, k);
    const Eigen::VectorXcd diag = solve.matrix_element(1, f);
    const Eigen::VectorXcd off = solve.matrix_element(2, f);

    // diagonal element reproduces the 1D free resolvent to grid accuracy
    const UniformGrid src = UniformGrid::over(-2.0, 2.0, 5e-4);
    std::vector<double> fs(src.n);
    for (int j = 0; j < src.n; ++j) fs[j] = probe.value(src.node(j));
    const auto ref = apply_resolvent(PointInteraction::resonant(1.0, 0.0), k, src,
                                     fs, op.t_nodes);
    double num = 0.0, den = 0.0, off_norm = 0.0;
    for (int i = 0; i < op.nt(); ++i) {
        num += op.t_cell[i] * std::norm(diag(i) - ref[i]);
        den += op.t_cell[i] * std::norm(ref[i]);
        off_norm += op.t_cell[i] * std::norm(off(i));
    }
    CHECK(std::sqrt(num / den) < 5e-3);   // second-order FD in t
    CHECK(std::sqrt(off_norm) < 1e-12);   // exact mode orthogonality
}

TEST_CASE("small resonant strip study behaves sanely") {
    auto family = [](double A) {
        return Potential1D::from_curvature(
            CurvatureProfile::bump(A, -2.0, 2.0, BumpShape::Odd));
    };
    const double A = tune_to_resonance(family, 2.0, 4.0);
    const auto gamma = CurvatureProfile::bump(A, -2.0, 2.0, BumpShape::Odd);

    Strip2DOptions opt;
    opt.alpha = 3.0;
    opt.d = 1.0;
    opt.k = cd(0.0, 1.0);
    opt.eps_list = {0.5, 0.35};
    opt.policy = coarse_policy();
    opt.decay_headroom = 10.0;
    opt.refinement_check = false;
    opt.negative_control = true;

    const auto shot = shoot_zero_energy(family(A));
    const auto [c1, c2] = constants_from_asymptotics(shot, 1e-8);
    const auto limit = PointInteraction::resonant(c1, c2);

    // an off-center probe; even probes cannot separate the sign-flip
    // interaction from Dirichlet decoupling (both act oddly on them)
    const Strip2DResult res = convergence_study_2d(
        gamma, {{1.2, 1.5, 1.0}}, limit, PointInteraction::dirichlet(), opt);

    REQUIRE(res.diagonal.rows.size() == 2);
    for (const auto& r : res.diagonal.rows) {
        CHECK(std::isfinite(r.error));
        CHECK(r.error > 0.0);
        CHECK(r.error < 2.0);
    }
    CHECK(res.diagonal.rows[1].error < res.diagonal.rows[0].error);
    // the cross-mode channel is strongly suppressed against the diagonal
    for (std::size_t e = 0; e < res.offdiagonal.size(); ++e)
        CHECK(res.offdiagonal[e].error < 0.1 * res.diagonal.rows[e].error);
    // at these scales the wrong limit is already worse than the right one
    CHECK(res.control.rows[1].error > res.diagonal.rows[1].error);
}
