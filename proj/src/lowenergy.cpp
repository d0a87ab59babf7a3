#include "qwlim/lowenergy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

std::complex<double> free_kernel(std::complex<double> k, double t, double tp) {
    if (!(k.imag() > 0.0))
        throw std::invalid_argument("free resolvent kernel needs Im k > 0");
    const std::complex<double> i(0.0, 1.0);
    return i / (2.0 * k) * std::exp(i * k * std::abs(t - tp));
}

Eigen::MatrixXd m_kernel(int n, const Quadrature& q, const UVSplit& uv) {
    if (n < 0) throw std::invalid_argument("kernel index must be nonnegative");
    const int N = q.size();
    double fact = 1.0;
    for (int j = 2; j <= n + 1; ++j) fact *= j;
    Eigen::MatrixXd M(N, N);
    Eigen::VectorXd us(N), vs(N);
    for (int i = 0; i < N; ++i) {
        us(i) = uv.u(q.nodes[i]);
        vs(i) = uv.v(q.nodes[i]);
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double d = std::abs(q.nodes[i] - q.nodes[j]);
            M(i, j) = -0.5 * us(i) * std::pow(d, n + 1) / fact * vs(j);
        }
    return M;
}

Eigen::MatrixXd weighted(const Quadrature& q, const Eigen::MatrixXd& raw) {
    const int N = q.size();
    Eigen::VectorXd sw(N);
    for (int i = 0; i < N; ++i) sw(i) = std::sqrt(q.weights[i]);
    return sw.asDiagonal() * raw * sw.asDiagonal();
}

Projectors projectors(const Quadrature& q, const UVSplit& uv) {
    const int N = q.size();
    Eigen::VectorXd ut(N), vt(N);
    double vu = 0.0;
    for (int i = 0; i < N; ++i) {
        const double sw = std::sqrt(q.weights[i]);
        ut(i) = sw * uv.u(q.nodes[i]);
        vt(i) = sw * uv.v(q.nodes[i]);
        vu += q.weights[i] * uv.u(q.nodes[i]) * uv.v(q.nodes[i]);
    }
    if (std::abs(vu) < 1e-14 * q.total_weight())
        throw HypothesisError("(v,u) = integral of V vanishes; the projector "
                              "P = (v,.)u/(v,u) is undefined");
    Projectors pr;
    pr.vu = vu;
    pr.P = ut * vt.transpose() / vu;
    pr.Q = Eigen::MatrixXd::Identity(N, N) - pr.P;
    return pr;
}

SigmaMin smallest_singular(const Eigen::MatrixXd& S, int max_iter, double tol) {
    const int N = static_cast<int>(S.rows());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
    SplitMix64 rng(0x51d5ce5u);
    Eigen::VectorXd x(N);
    for (int i = 0; i < N; ++i) x(i) = rng.next_signed_unit();
    x.normalize();

    double sigma_prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd y = lu.transpose().solve(x); // S^{-T} x
        Eigen::VectorXd z = lu.solve(y);             // S^{-1} S^{-T} x
        const double nz = z.norm();
        if (!std::isfinite(nz) || nz == 0.0) break;
        x = z / nz;
        const double sigma = (S * x).norm();
        if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * sigma) {
            sigma_prev = sigma;
            break;
        }
        sigma_prev = sigma;
    }
    SigmaMin out;
    out.vector = x;
    out.sigma = (S * x).norm();
    return out;
}

namespace {

// vector of sqrt(w_i) f(t_i)
Eigen::VectorXd tilde_vector(const Quadrature& q,
                             const std::function<double(double)>& f) {
    Eigen::VectorXd x(q.size());
    for (int i = 0; i < q.size(); ++i)
        x(i) = std::sqrt(q.weights[i]) * f(q.nodes[i]);
    return x;
}

} // namespace

ResonanceReport detect_resonance(const Potential1D& potential, int n_nodes) {
    if (n_nodes < 51)
        throw std::invalid_argument("resonance detection needs at least 51 nodes");
    potential.validate_standing_assumptions();

    const Quadrature q = Quadrature::midpoint(potential, n_nodes);
    const UVSplit uv = uv_split(potential);
    const int N = q.size();

    const Eigen::MatrixXd M0 = weighted(q, m_kernel(0, q, uv));
    const Projectors pr = projectors(q, uv);
    const Eigen::MatrixXd S =
        Eigen::MatrixXd::Identity(N, N) + pr.Q * M0 * pr.Q;

    const SigmaMin sm = smallest_singular(S);

    ResonanceReport rep;
    rep.n_nodes = N;
    rep.quadrature = q;
    rep.threshold = std::max(1e-4, 10.0 / (static_cast<double>(N) * N));
    rep.sigma_min = sm.sigma;
    rep.resonant = sm.sigma < rep.threshold;
    if (!rep.resonant) return rep;

    // restrict to ran Q and renormalize (unit l2 = unit weighted L2)
    Eigen::VectorXd phit = pr.Q * sm.vector;
    const double nn = phit.norm();
    if (nn == 0.0) throw SolverError("resonance vector collapsed under Q");
    phit /= nn;
    rep.residual = (S * phit).norm();
    rep.sigma_min = std::min(rep.sigma_min, rep.residual);

    Eigen::VectorXd phi(N);
    for (int i = 0; i < N; ++i) phi(i) = phit(i) / std::sqrt(q.weights[i]);

    // c1 = (v, m0 phi)/(v,u), c2 = 1/2 ((.)v, phi)
    const Eigen::MatrixXd M0raw = m_kernel(0, q, uv);
    double c1 = 0.0, c2 = 0.0;
    for (int i = 0; i < N; ++i) {
        double m0phi = 0.0;
        for (int j = 0; j < N; ++j) m0phi += M0raw(i, j) * q.weights[j] * phi(j);
        c1 += q.weights[i] * uv.v(q.nodes[i]) * m0phi;
        c2 += 0.5 * q.weights[i] * q.nodes[i] * uv.v(q.nodes[i]) * phi(i);
    }
    c1 /= pr.vu;

    // overall sign: c1 >= 0, c2 > 0 when c1 is negligible
    const double cn = std::hypot(c1, c2);
    const bool flip = (c1 < -1e-8 * cn) || (std::abs(c1) <= 1e-8 * cn && c2 < 0.0);
    if (flip) {
        c1 = -c1;
        c2 = -c2;
        phi = -phi;
        phit = -phit;
    }
    rep.phi0 = phi;
    rep.c1 = c1;
    rep.c2 = c2;
    rep.plateau_left = c1 + c2;
    rep.plateau_right = c1 - c2;

    if (potential.is_symmetric()) {
        // parity by node pairing; requires a mirror-symmetric node set
        const double mid = 0.5 * (potential.support_min() + potential.support_max());
        bool mirrored = true;
        for (int i = 0; i < N / 2 + 1; ++i)
            if (std::abs((q.nodes[i] - mid) + (q.nodes[N - 1 - i] - mid)) > 1e-9) {
                mirrored = false;
                break;
            }
        if (mirrored) {
            double even_err = 0.0, odd_err = 0.0;
            for (int i = 0; i < N; ++i) {
                even_err += std::pow(phi(i) - phi(N - 1 - i), 2) * q.weights[i];
                odd_err += std::pow(phi(i) + phi(N - 1 - i), 2) * q.weights[i];
            }
            even_err = std::sqrt(even_err);
            odd_err = std::sqrt(odd_err);
            if (even_err < 1e-4 && even_err < odd_err)
                rep.parity = Parity::Even;
            else if (odd_err < 1e-4 && odd_err < even_err)
                rep.parity = Parity::Odd;
        }
    }
    return rep;
}

std::complex<double> TransitionOperator::element(
    const std::function<double(double)>& x,
    const std::function<double(double)>& y) const {
    const Eigen::VectorXd xt = tilde_vector(q, x);
    const Eigen::VectorXd yt = tilde_vector(q, y);
    return xt.cast<std::complex<double>>().transpose() * T *
           yt.cast<std::complex<double>>();
}

double TransitionOperatorReal::element(const std::function<double(double)>& x,
                                       const std::function<double(double)>& y) const {
    const Eigen::VectorXd xt = tilde_vector(q, x);
    const Eigen::VectorXd yt = tilde_vector(q, y);
    return xt.transpose() * T * yt;
}

TransitionOperator transition_operator(const Potential1D& potential,
                                       std::complex<double> k, int n_nodes) {
    if (!(k.imag() > 0.0))
        throw std::invalid_argument("transition operator needs Im k > 0");
    const Quadrature q = Quadrature::midpoint(potential, n_nodes);
    const UVSplit uv = uv_split(potential);
    const int N = q.size();

    Eigen::MatrixXcd A(N, N); // I + u G_k v, symmetrized
    for (int i = 0; i < N; ++i) {
        const double swu = std::sqrt(q.weights[i]) * uv.u(q.nodes[i]);
        for (int j = 0; j < N; ++j) {
            const double swv = std::sqrt(q.weights[j]) * uv.v(q.nodes[j]);
            A(i, j) = swu * free_kernel(k, q.nodes[i], q.nodes[j]) * swv;
        }
        A(i, i) += 1.0;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    TransitionOperator out;
    out.q = q;
    out.T = lu.solve(Eigen::MatrixXcd::Identity(N, N));
    if (!out.T.allFinite())
        throw SolverError("transition operator solve produced non-finite values");
    out.identity_residual =
        (out.T * A - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
    return out;
}

namespace {

// I + u G_{i kappa} v in symmetrized coordinates; real for kappa > 0
Eigen::MatrixXd system_imag_axis(const Quadrature& q, const UVSplit& uv,
                                 double kappa) {
    const int N = q.size();
    Eigen::MatrixXd A(N, N);
    for (int i = 0; i < N; ++i) {
        const double swu = std::sqrt(q.weights[i]) * uv.u(q.nodes[i]);
        for (int j = 0; j < N; ++j) {
            const double swv = std::sqrt(q.weights[j]) * uv.v(q.nodes[j]);
            const double g =
                std::exp(-kappa * std::abs(q.nodes[i] - q.nodes[j])) / (2.0 * kappa);
            A(i, j) = swu * g * swv;
        }
        A(i, i) += 1.0;
    }
    return A;
}

} // namespace

TransitionOperatorReal transition_operator_imag_axis(const Potential1D& potential,
                                                     double kappa, int n_nodes) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    const Quadrature q = Quadrature::midpoint(potential, n_nodes);
    const UVSplit uv = uv_split(potential);
    const Eigen::MatrixXd A = system_imag_axis(q, uv, kappa);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    TransitionOperatorReal out;
    out.q = q;
    out.T = lu.solve(Eigen::MatrixXd::Identity(q.size(), q.size()));
    if (!out.T.allFinite())
        throw SolverError("transition operator solve produced non-finite values");
    return out;
}

double transition_norm_imag_axis(const Potential1D& potential, double kappa,
                                 int n_nodes) {
    const Quadrature q = Quadrature::midpoint(potential, n_nodes);
    const UVSplit uv = uv_split(potential);
    const Eigen::MatrixXd A = system_imag_axis(q, uv, kappa);
    const SigmaMin sm = smallest_singular(A);
    if (sm.sigma <= 0.0) throw SolverError("singular transition system");
    return 1.0 / sm.sigma;
}

LaurentReport laurent_matrix_elements(const Potential1D& potential,
                                      const std::vector<double>& kappas,
                                      int n_nodes) {
    if (kappas.size() < 5)
        throw std::invalid_argument("Laurent fit needs at least 5 samples");
    for (double kp : kappas)
        if (!(kp > 0.0 && kp <= 0.2))
            throw std::invalid_argument("Laurent samples must lie in (0, 0.2]");

    const UVSplit uv = uv_split(potential);
    auto vfun = [&](double t) { return uv.v(t); };
    auto ufun = [&](double t) { return uv.u(t); };
    auto xvfun = [&](double t) { return t * uv.v(t); };
    auto uxfun = [&](double t) { return t * uv.u(t); };

    const int M = static_cast<int>(kappas.size());
    Eigen::MatrixXd samples(M, 4);
    for (int s = 0; s < M; ++s) {
        const TransitionOperatorReal T =
            transition_operator_imag_axis(potential, kappas[s], n_nodes);
        samples(s, 0) = T.element(vfun, ufun);
        samples(s, 1) = T.element(xvfun, ufun);
        samples(s, 2) = T.element(vfun, uxfun);
        samples(s, 3) = T.element(xvfun, uxfun);
    }

    // On the imaginary axis (ik)^n = (-kappa)^n, so
    //   kappa g(kappa) = -t_{-1} + t_0 kappa - t_1 kappa^2 + ...
    // Fit a quintic in kappa (three guard terms) and read off the low orders.
    const double kmax = *std::max_element(kappas.begin(), kappas.end());
    const int deg = 5;
    Eigen::MatrixXd V(M, deg + 1);
    for (int s = 0; s < M; ++s) {
        double p = 1.0;
        for (int d = 0; d <= deg; ++d) {
            V(s, d) = p;
            p *= kappas[s] / kmax;
        }
    }
    const auto qr = V.colPivHouseholderQr();

    LaurentReport rep;
    LaurentCoeffs* out[4] = {&rep.v_T_u, &rep.xv_T_u, &rep.v_T_ux, &rep.xv_T_ux};
    for (int e = 0; e < 4; ++e) {
        Eigen::VectorXd y(M);
        for (int s = 0; s < M; ++s) y(s) = kappas[s] * samples(s, e);
        const Eigen::VectorXd c = qr.solve(y);
        rep.max_fit_residual =
            std::max(rep.max_fit_residual, (V * c - y).cwiseAbs().maxCoeff());
        out[e]->pole = -c(0);
        out[e]->constant = c(1) / kmax;
        out[e]->linear = -c(2) / (kmax * kmax);
    }
    return rep;
}

} // namespace qwlim
