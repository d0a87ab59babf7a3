#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qwlim/errors.hpp"
#include "qwlim/lowenergy.hpp"
#include "qwlim/numeric.hpp"
#include "qwlim/potential.hpp"
#include "qwlim/shooting.hpp"

using namespace qwlim;
using cd = std::complex<double>;

TEST_CASE("free resolvent kernel values") {
    const cd k(0.0, 1.0);
    CHECK(free_kernel(k, 0.3, 0.3) == cd(0.5, 0.0));
    CHECK(free_kernel(k, 0.0, 1.0).real() ==
          doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
    // symmetry at scattered points
    const cd kc(0.7, 0.9);
    for (auto [t, tp] : {std::pair{0.1, -2.0}, std::pair{1.4, 0.2}}) {
        const cd a = free_kernel(kc, t, tp), b = free_kernel(kc, tp, t);
        CHECK(std::abs(a - b) == 0.0);
    }
    CHECK_THROWS_AS(free_kernel(cd(1.0, -0.1), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("kernel matrices at the two-node quadrature of the unit well") {
    const auto V = Potential1D::single_well(1.0, 1.0);
    const Quadrature q = Quadrature::midpoint(V, 2);
    REQUIRE(q.nodes[0] == doctest::Approx(0.25));
    REQUIRE(q.nodes[1] == doctest::Approx(0.75));
    const UVSplit uv = uv_split(V);
    const Eigen::MatrixXd m0 = m_kernel(0, q, uv);
    CHECK(m0(0, 0) == 0.0);
    CHECK(m0(1, 1) == 0.0);
    CHECK(m0(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    const Eigen::MatrixXd m1 = m_kernel(1, q, uv);
    CHECK(m1(0, 1) == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("quadrature covers the support with per-piece midpoints") {
    const auto V = Potential1D::triple_well({2.0, 1.0, 6.0}, {0.01, 0.4, 0.0666});
    const Quadrature q = Quadrature::midpoint(V, 301);
    CHECK(q.size() == 301);
    CHECK(q.total_weight() ==
          doctest::Approx(V.support_max() - V.support_min()).epsilon(1e-13));
    for (int i = 1; i < q.size(); ++i) CHECK(q.nodes[i] > q.nodes[i - 1]);
    CHECK(q.nodes.front() > V.support_min());
    CHECK(q.nodes.back() < V.support_max());
}

TEST_CASE("projectors are exact rank-one projections") {
    const auto V = Potential1D::single_well(2.0, 1.3);
    const Quadrature q = Quadrature::midpoint(V, 101);
    const UVSplit uv = uv_split(V);
    const Projectors pr = projectors(q, uv);
    const int N = q.size();

    CHECK((pr.P * pr.P - pr.P).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pr.Q * pr.Q - pr.Q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pr.P * pr.Q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(pr.P.trace() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pr.vu == doctest::Approx(V.integral()).epsilon(1e-12));

    Eigen::VectorXd ut(N);
    for (int i = 0; i < N; ++i)
        ut(i) = std::sqrt(q.weights[i]) * uv.u(q.nodes[i]);
    CHECK((pr.P * ut - ut).norm() < 1e-12 * ut.norm());
    CHECK((pr.Q * ut).norm() < 1e-12 * ut.norm());

    const auto balanced = Potential1D::piecewise({{1.0, 0.0, 1.0}, {-1.0, 1.0, 2.0}});
    const Quadrature qb = Quadrature::midpoint(balanced, 64);
    CHECK_THROWS_AS(projectors(qb, uv_split(balanced)), HypothesisError);
}

TEST_CASE("smallest singular value matches a dense SVD") {
    const auto V = Potential1D::single_well(M_PI, 1.0);
    for (int N : {101, 201}) {
        const Quadrature q = Quadrature::midpoint(V, N);
        const UVSplit uv = uv_split(V);
        const Projectors pr = projectors(q, uv);
        const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(N, N) +
                                  pr.Q * weighted(q, m_kernel(0, q, uv)) * pr.Q;
        const SigmaMin mine = smallest_singular(S);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
        CHECK(mine.sigma ==
              doctest::Approx(svd.singularValues().tail(1)(0)).epsilon(1e-8));
    }
}

TEST_CASE("square-well resonance detection across the criterion ab = n pi") {
    SUBCASE("ab = pi is resonant and sigma_min refines with N") {
        double last = 1.0;
        for (int N : {201, 401, 801}) {
            const ResonanceReport rep =
                detect_resonance(Potential1D::single_well(M_PI, 1.0), N);
            CHECK(rep.sigma_min < last);
            last = rep.sigma_min;
        }
        const ResonanceReport rep =
            detect_resonance(Potential1D::single_well(M_PI, 1.0), 801);
        CHECK(rep.resonant);
        CHECK(rep.parity == Parity::Odd);
        CHECK(std::abs(rep.c1) / std::hypot(rep.c1, rep.c2) < 1e-3);
        CHECK(rep.residual <= 10.0 * rep.sigma_min + 1e-16);
    }
    SUBCASE("ab = pi/2 stays far from resonance under refinement") {
        for (int N : {201, 401}) {
            const ResonanceReport rep =
                detect_resonance(Potential1D::single_well(M_PI / 2.0, 1.0), N);
            CHECK_FALSE(rep.resonant);
            CHECK(rep.sigma_min > 1e-1);
        }
    }
    SUBCASE("ab = 2 pi is the even resonance") {
        const ResonanceReport rep =
            detect_resonance(Potential1D::single_well(2.0 * M_PI, 1.0), 801);
        CHECK(rep.resonant);
        CHECK(rep.parity == Parity::Even);
        CHECK(std::abs(rep.c2) / std::hypot(rep.c1, rep.c2) < 1e-3);
    }
    SUBCASE("coarse quadratures are rejected") {
        CHECK_THROWS_AS(detect_resonance(Potential1D::single_well(M_PI, 1.0), 50),
                        std::invalid_argument);
    }
}

TEST_CASE("resonance function lies in ran Q") {
    const auto V = Potential1D::single_well(M_PI, 1.0);
    const ResonanceReport rep = detect_resonance(V, 401);
    REQUIRE(rep.resonant);
    const Quadrature& q = rep.quadrature;
    const Projectors pr = projectors(q, uv_split(V));
    Eigen::VectorXd phit(q.size());
    for (int i = 0; i < q.size(); ++i)
        phit(i) = std::sqrt(q.weights[i]) * rep.phi0(i);
    CHECK((pr.P * phit).norm() < 1e-10);
}

// the (c1, c2) pair from the resonance-equation route must agree
// projectively with the shooting constants on every resonant fixture
TEST_CASE("cross-oracle agreement of the resonance constants") {
    auto angle_between = [](double a1, double a2, double b1, double b2) {
        const double na = std::hypot(a1, a2), nb = std::hypot(b1, b2);
        double dot = (a1 * b1 + a2 * b2) / (na * nb);
        dot = std::max(-1.0, std::min(1.0, dot));
        return std::acos(dot);
    };
    auto sign_fix = [](double& c1, double& c2) {
        const double n = std::hypot(c1, c2);
        if (c1 < -1e-8 * n || (std::abs(c1) <= 1e-8 * n && c2 < 0.0)) {
            c1 = -c1;
            c2 = -c2;
        }
    };

    std::vector<Potential1D> fixtures;
    fixtures.push_back(Potential1D::single_well(M_PI, 1.0));
    fixtures.push_back(Potential1D::single_well(2.0 * M_PI, 1.0));
    {
        const double beta = 0.4, a2 = 1.0, a3 = 6.0;
        const double a1 = solve_triple_well_a1(a2, a3, beta, beta, beta);
        fixtures.push_back(Potential1D::triple_well(
            {a1, a2, a3}, {beta / a1, beta / a2, beta / a3}));
    }
    {
        auto family = [](double A) {
            return Potential1D::from_curvature(
                CurvatureProfile::bump(A, -2.0, 2.0, BumpShape::Odd));
        };
        const double A = tune_to_resonance(family, 2.0, 4.0);
        fixtures.push_back(family(A));
    }

    for (const auto& V : fixtures) {
        const ResonanceReport rep = detect_resonance(V, 1601);
        REQUIRE(rep.resonant);
        const ShootResult shot = shoot_zero_energy(V, 20000);
        auto [c1, c2] = constants_from_asymptotics(shot, 1e-6);
        sign_fix(c1, c2);
        CHECK(angle_between(rep.c1, rep.c2, c1, c2) < 1e-3);
    }
}

TEST_CASE("transition operator satisfies its defining identity") {
    const auto V = Potential1D::single_well(M_PI / 2.0, 1.0);
    const TransitionOperator T = transition_operator(V, cd(0.0, 1.0), 201);
    CHECK(T.identity_residual < 1e-10);
    // the imaginary-axis path agrees with the complex path
    const TransitionOperatorReal Tr = transition_operator_imag_axis(V, 1.0, 201);
    CHECK((T.T.real() - Tr.T).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(T.T.imag().cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("transition norm growth distinguishes the resonant well") {
    const int N = 401;
    const std::vector<double> kappas{1e-2, 3e-3, 1e-3};
    std::vector<double> lr, lk;
    for (double kp : kappas) {
        lr.push_back(std::log(
            transition_norm_imag_axis(Potential1D::single_well(M_PI, 1.0), kp, N)));
        lk.push_back(std::log(kp));
    }
    const auto [slope_res, icept] = fit_line(lk, lr);
    CHECK(slope_res == doctest::Approx(-1.0).epsilon(0.1));

    std::vector<double> ln;
    for (double kp : kappas)
        ln.push_back(std::log(transition_norm_imag_axis(
            Potential1D::single_well(M_PI / 2.0, 1.0), kp, N)));
    const auto [slope_non, icept2] = fit_line(lk, ln);
    CHECK(std::abs(slope_non) < 0.05);
}

TEST_CASE("Laurent matrix elements at modest quadrature") {
    std::vector<double> kappas;
    for (int i = 0; i < 14; ++i)
        kappas.push_back(0.02 * std::pow(6.0, i / 13.0)); // 0.02 .. 0.12

    SUBCASE("non-resonant identities") {
        const auto V = Potential1D::single_well(M_PI / 2.0, 1.0);
        const LaurentReport rep = laurent_matrix_elements(V, kappas, 401);
        CHECK(std::abs(rep.v_T_u.pole) < 1e-6);
        CHECK(std::abs(rep.v_T_u.constant) < 1e-3);
        CHECK(std::abs(rep.xv_T_u.constant) < 1e-3);
        CHECK(rep.v_T_u.linear == doctest::Approx(-2.0).epsilon(1e-3));
    }
    SUBCASE("resonant identities for the odd well (c1 = 0)") {
        const auto V = Potential1D::single_well(M_PI, 1.0);
        const LaurentReport rep = laurent_matrix_elements(V, kappas, 801);
        // t_{-1} annihilates u on both sides
        CHECK(std::abs(rep.v_T_u.pole) < 1e-6);
        CHECK(std::abs(rep.xv_T_u.pole) < 1e-4);
        CHECK(std::abs(rep.v_T_ux.pole) < 1e-4);
        // ((.)v, t_{-1} u(.)) = 2 c2^2/(c1^2+c2^2) = 2 here
        CHECK(rep.xv_T_ux.pole == doctest::Approx(2.0).epsilon(2e-3));
        // (v, t1 u) = -2 c2^2/(c1^2+c2^2) = -2
        CHECK(rep.v_T_u.linear == doctest::Approx(-2.0).epsilon(1e-2));
        // ((.)v, t0 u) = 2 c1 c2/(c1^2+c2^2) = 0 for the odd resonance
        CHECK(std::abs(rep.xv_T_u.constant) < 2e-3);
    }
    SUBCASE("input validation") {
        const auto V = Potential1D::single_well(M_PI, 1.0);
        CHECK_THROWS_AS(laurent_matrix_elements(V, {0.1, 0.2}, 101),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            laurent_matrix_elements(V, {0.3, 0.1, 0.05, 0.02, 0.01}, 101),
            std::invalid_argument);
    }
}

TEST_CASE("free kernel modulus bound and index validation") {
    for (const cd k : {cd(0.0, 1.0), cd(1.5, 0.4), cd(-0.3, 2.0)})
        for (double t : {-2.0, 0.1})
            for (double tp : {-0.5, 3.0})
                CHECK(std::abs(free_kernel(k, t, tp)) <=
                      1.0 / (2.0 * std::abs(k)) + 1e-15);
    const auto V = Potential1D::single_well(1.0, 1.0);
    const Quadrature q = Quadrature::midpoint(V, 8);
    CHECK_THROWS_AS(m_kernel(-1, q, uv_split(V)), std::invalid_argument);
}
