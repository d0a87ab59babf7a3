#include "qwlim/point_interaction.hpp"

#include <cmath>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

cd gk(cd k, double x) { return I / (2.0 * k) * std::exp(I * k * std::abs(x)); }
cd gk_prime(cd k, double x) { return -0.5 * sgn(x) * std::exp(I * k * std::abs(x)); }

void require_upper_halfplane(cd k) {
    if (!(k.imag() > 0.0)) throw std::invalid_argument("need Im k > 0");
}

// weight of the image term G_k(|t|+|t'|), from the sign pattern of (t,t')
double image_weight(const PointInteraction& op, double s, double sp) {
    if (op.is_dirichlet()) return -1.0;
    const double c1 = op.c1(), c2 = op.c2();
    const double S = c1 * c1 + c2 * c2;
    return (-c2 * c2 + c2 * c2 * s * sp - c1 * c2 * (s + sp)) / S;
}

} // namespace

PointInteraction PointInteraction::resonant(double c1, double c2) {
    if (!(c1 * c1 + c2 * c2 > 0.0))
        throw std::invalid_argument("resonant point interaction needs (c1, c2) != 0");
    return PointInteraction(Kind::Resonant, c1, c2);
}

PointInteraction PointInteraction::dirichlet() {
    return PointInteraction(Kind::Dirichlet, 0.0, 0.0);
}

std::complex<double> resolvent_kernel(const PointInteraction& op, cd k, double t,
                                      double tp) {
    require_upper_halfplane(k);
    if (op.is_dirichlet())
        return gk(k, t - tp) - gk(k, std::abs(t) + std::abs(tp));
    return gk(k, t - tp) +
           image_weight(op, sgn(t), sgn(tp)) * gk(k, std::abs(t) + std::abs(tp));
}

namespace {

// correction coefficients alpha, beta with
//   g = G_k f + alpha G_k(t) + beta G'_k(t)
void correction_coeffs(const PointInteraction& op, cd k, cd GF, cd GPF, cd& alpha,
                       cd& beta) {
    if (op.is_dirichlet()) {
        alpha = 2.0 * I * k * GF;
        beta = 0.0;
        return;
    }
    const double c1 = op.c1(), c2 = op.c2();
    const double S = c1 * c1 + c2 * c2;
    alpha = 2.0 * I * k * (c2 * c2 / S) * GF - 2.0 * (c1 * c2 / S) * GPF;
    beta = 2.0 / (I * k) * (c2 * c2 / S) * GPF + 2.0 * (c1 * c2 / S) * GF;
}

} // namespace

std::vector<cd> apply_resolvent(const PointInteraction& op, cd k,
                                const UniformGrid& src, const std::vector<double>& f,
                                const std::vector<double>& targets) {
    require_upper_halfplane(k);
    if (static_cast<int>(f.size()) != src.n)
        throw std::invalid_argument("sample count does not match the grid");

    std::vector<double> sources(src.n);
    std::vector<cd> charges(src.n);
    cd GF = 0.0, GPF = 0.0;
    for (int j = 0; j < src.n; ++j) {
        const double t = src.node(j);
        sources[j] = t;
        charges[j] = src.weight(j) * f[j];
        GF += src.weight(j) * f[j] * gk(k, t);
        GPF += src.weight(j) * f[j] * (0.5 * sgn(t)) * std::exp(I * k * std::abs(t));
    }
    const std::vector<cd> sums = greens_sums(k, targets, sources, charges);

    cd alpha, beta;
    correction_coeffs(op, k, GF, GPF, alpha, beta);

    std::vector<cd> g(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        g[i] = I / (2.0 * k) * sums[i] + alpha * gk(k, targets[i]) +
               beta * gk_prime(k, targets[i]);
    return g;
}

std::vector<cd> apply_resolvent(const PointInteraction& op, cd k,
                                const UniformGrid& src,
                                const std::vector<double>& f) {
    std::vector<double> targets(src.n);
    for (int j = 0; j < src.n; ++j) targets[j] = src.node(j);
    return apply_resolvent(op, k, src, f, targets);
}

std::vector<double> apply_resolvent_imag_axis(const PointInteraction& op,
                                              double kappa, const UniformGrid& src,
                                              const std::vector<double>& f,
                                              const std::vector<double>& targets) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (static_cast<int>(f.size()) != src.n)
        throw std::invalid_argument("sample count does not match the grid");

    std::vector<double> sources(src.n), charges(src.n);
    double GF = 0.0, GPF = 0.0; // (G_k f)(0) and (G'_k f)(0) at k = i kappa
    for (int j = 0; j < src.n; ++j) {
        const double t = src.node(j);
        sources[j] = t;
        charges[j] = src.weight(j) * f[j];
        const double e = std::exp(-kappa * std::abs(t));
        GF += src.weight(j) * f[j] * e / (2.0 * kappa);
        GPF += src.weight(j) * f[j] * 0.5 * sgn(t) * e;
    }
    const std::vector<double> sums =
        greens_sums_imag_axis(kappa, targets, sources, charges);

    // k = i kappa: 2ik = -2 kappa, 2/(ik) = -2/kappa, G_k(t) real
    double alpha, beta;
    if (op.is_dirichlet()) {
        alpha = -2.0 * kappa * GF;
        beta = 0.0;
    } else {
        const double c1 = op.c1(), c2 = op.c2();
        const double S = c1 * c1 + c2 * c2;
        alpha = -2.0 * kappa * (c2 * c2 / S) * GF - 2.0 * (c1 * c2 / S) * GPF;
        beta = -2.0 / kappa * (c2 * c2 / S) * GPF + 2.0 * (c1 * c2 / S) * GF;
    }

    std::vector<double> g(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double x = targets[i];
        const double e = std::exp(-kappa * std::abs(x));
        g[i] = sums[i] / (2.0 * kappa) + alpha * e / (2.0 * kappa) +
               beta * (-0.5 * sgn(x) * e);
    }
    return g;
}

std::vector<double> apply_resolvent_imag_axis(const PointInteraction& op,
                                              double kappa, const UniformGrid& src,
                                              const std::vector<double>& f) {
    std::vector<double> targets(src.n);
    for (int j = 0; j < src.n; ++j) targets[j] = src.node(j);
    return apply_resolvent_imag_axis(op, kappa, src, f, targets);
}

BoundaryValues resolvent_boundary_values(const PointInteraction& op, cd k,
                                         const UniformGrid& src,
                                         const std::vector<double>& f) {
    require_upper_halfplane(k);
    cd GF = 0.0, GPF = 0.0, DGF = 0.0;
    for (int j = 0; j < src.n; ++j) {
        const double t = src.node(j);
        const cd e = std::exp(I * k * std::abs(t));
        GF += src.weight(j) * f[j] * (I / (2.0 * k)) * e;
        GPF += src.weight(j) * f[j] * 0.5 * sgn(t) * e;
        // (d/dx G_k f)(0) = integral G'_k(0 - t) f = GPF as well
        DGF += src.weight(j) * f[j] * 0.5 * sgn(t) * e;
    }
    cd alpha, beta;
    correction_coeffs(op, k, GF, GPF, alpha, beta);
    BoundaryValues bv;
    // G_k(0) = i/2k, G'_k(0+-) = -+1/2, G''_k(0+-) = -ik/2 away from the delta
    bv.g0_plus = GF + alpha * (I / (2.0 * k)) + beta * (-0.5);
    bv.g0_minus = GF + alpha * (I / (2.0 * k)) + beta * (0.5);
    bv.dg0_plus = DGF + alpha * (-0.5) + beta * (-I * k / 2.0);
    bv.dg0_minus = DGF + alpha * (0.5) + beta * (-I * k / 2.0);
    return bv;
}

std::complex<double> free_propagator(double time, double x) {
    if (time == 0.0) throw std::invalid_argument("propagator needs time != 0");
    const cd pref = 1.0 / std::sqrt(4.0 * M_PI * I * time);
    return pref * std::exp(I * x * x / (4.0 * time));
}

std::complex<double> propagator_kernel(const PointInteraction& op, double time,
                                       double x, double y) {
    if (op.is_dirichlet())
        throw std::invalid_argument("propagator is provided for the resonant family");
    const double c1 = op.c1(), c2 = op.c2();
    const double S = c1 * c1 + c2 * c2;
    const double bracket = (c2 * c2 + c1 * c2 * sgn(x) + c1 * c2 * sgn(y) -
                            c2 * c2 * sgn(x) * sgn(y)) /
                           S;
    return free_propagator(time, x - y) -
           bracket * free_propagator(time, std::abs(x) + std::abs(y));
}

std::complex<double> GaussianPacket::value(double y) const {
    const double s2 = width * width;
    return std::pow(2.0 * M_PI * s2, -0.25) *
           std::exp(cd(-(y - center) * (y - center) / (4.0 * s2), momentum * y));
}

std::vector<cd> evolve_packet(const PointInteraction& op, const GaussianPacket& packet,
                              double time, const UniformGrid& out, double quad_step) {
    if (!(quad_step > 0.0)) throw std::invalid_argument("quadrature step must be positive");
    std::vector<cd> psi(out.n);
    if (time == 0.0) {
        for (int i = 0; i < out.n; ++i) psi[i] = packet.value(out.node(i));
        return psi;
    }
    const double a = packet.center - 12.0 * packet.width;
    const double b = packet.center + 12.0 * packet.width;
    int m = static_cast<int>(std::ceil((b - a) / quad_step));
    if (m % 2 == 1) ++m; // Simpson needs an even interval count
    const double h = (b - a) / m;

    std::vector<cd> f(m + 1);
    std::vector<double> ynodes(m + 1);
    for (int j = 0; j <= m; ++j) {
        ynodes[j] = a + j * h;
        f[j] = packet.value(ynodes[j]);
    }
    for (int i = 0; i < out.n; ++i) {
        const double x = out.node(i);
        cd acc = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            acc += w * propagator_kernel(op, time, x, ynodes[j]) * f[j];
        }
        psi[i] = acc * h / 3.0;
    }
    return psi;
}

std::complex<double> eigenfunction(const PointInteraction& op, double p, int branch,
                                   double x) {
    if (!(p > 0.0)) throw std::invalid_argument("momentum must be positive");
    if (op.is_dirichlet())
        throw std::invalid_argument("generalized eigenfunctions are provided for the "
                                    "resonant family");
    const double c1 = op.c1(), c2 = op.c2();
    const double S = c1 * c1 + c2 * c2;
    const double T = (c1 * c1 - c2 * c2) / S;
    const double R = 2.0 * c1 * c2 / S;
    if (branch >= 0) {
        if (x < 0.0) return std::exp(I * p * x) + R * std::exp(-I * p * x);
        return T * std::exp(I * p * x);
    }
    if (x < 0.0) return T * std::exp(-I * p * x);
    return std::exp(-I * p * x) - R * std::exp(I * p * x);
}

ScatteringData scattering_matrix(const PointInteraction& op) {
    ScatteringData s;
    if (op.is_dirichlet()) {
        s.transmission = 0.0;
        s.reflection_plus = -1.0;
        s.reflection_minus = -1.0;
        return s;
    }
    const double c1 = op.c1(), c2 = op.c2();
    const double S = c1 * c1 + c2 * c2;
    s.transmission = (c1 * c1 - c2 * c2) / S;
    s.reflection_plus = 2.0 * c1 * c2 / S;
    s.reflection_minus = -s.reflection_plus;
    return s;
}

namespace {

// C^2 core function on [-W, W] with prescribed boundary data at 0 obeying
// the operator's vertex conditions; eta(x) = (v + d x) * cutoff.
struct CoreFunction {
    double v_minus, d_minus, v_plus, d_plus, W;

    static CoreFunction make(const PointInteraction& op, double s, double r, double W) {
        const double c1 = op.is_dirichlet() ? 1.0 : op.c1();
        const double c2 = op.is_dirichlet() ? 1.0 : op.c2();
        CoreFunction e{};
        e.W = W;
        e.v_minus = (c1 + c2) * s;
        e.v_plus = (c1 - c2) * s;
        e.d_minus = (c1 - c2) * r;
        e.d_plus = (c1 + c2) * r;
        return e;
    }

    double value(double x) const {
        if (x >= 0.0)
            return (v_plus + d_plus * x) * (1.0 - smoothstep5(x / W));
        return (v_minus + d_minus * x) * (1.0 - smoothstep5(-x / W));
    }
    double second_derivative(double x) const {
        if (x >= 0.0) {
            const double u = x / W;
            return -(v_plus + d_plus * x) * smoothstep5_d2(u) / (W * W) -
                   2.0 * d_plus * smoothstep5_d1(u) / W;
        }
        const double u = -x / W;
        return -(v_minus + d_minus * x) * smoothstep5_d2(u) / (W * W) +
               2.0 * d_minus * smoothstep5_d1(u) / W;
    }
};

// Simpson integral of fn over [a, b] with n (even) intervals
template <class F>
cd simpson(F fn, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    cd acc = fn(a) + fn(b);
    for (int j = 1; j < n; ++j)
        acc += ((j % 2 == 1) ? 4.0 : 2.0) * fn(a + j * h);
    return acc * h / 3.0;
}

} // namespace

double weak_resonance_residual(const PointInteraction& op, double halfwidth,
                               int points_per_side) {
    // step resonance (A for t <= 0, B for t > 0) with A(c1-c2) = B(c1+c2)
    double A, B;
    if (op.is_dirichlet()) {
        A = 1.0;
        B = 0.0;
    } else {
        A = op.c1() + op.c2();
        B = op.c1() - op.c2();
    }
    double worst = 0.0;
    for (auto [s, r] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.7, -0.4}}) {
        const CoreFunction eta = CoreFunction::make(op, s, r, halfwidth);
        const cd left = simpson([&](double x) { return cd(eta.second_derivative(x) * A); },
                                -halfwidth, 0.0, points_per_side);
        const cd right = simpson([&](double x) { return cd(eta.second_derivative(x) * B); },
                                 0.0, halfwidth, points_per_side);
        worst = std::max(worst, std::abs(left + right));
    }
    return worst;
}

double weak_eigenfunction_residual(const PointInteraction& op, double p, int branch,
                                   double halfwidth, int points_per_side) {
    // clamp the split point to one-sided limits so the quadrature endpoint
    // sees the correct branch of the discontinuous functions
    const double tiny = 1e-300;
    double worst = 0.0;
    for (auto [s, r] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.5, 0.9}}) {
        const CoreFunction eta = CoreFunction::make(op, s, r, halfwidth);
        auto at = [&](double x) {
            return (-eta.second_derivative(x) - p * p * eta.value(x)) *
                   eigenfunction(op, p, branch, x);
        };
        const cd left = simpson([&](double x) { return at(std::min(x, -tiny)); },
                                -halfwidth, 0.0, points_per_side);
        const cd right = simpson([&](double x) { return at(std::max(x, tiny)); }, 0.0,
                                 halfwidth, points_per_side);
        worst = std::max(worst, std::abs(left + right));
    }
    return worst;
}

SpectrumProbe spectrum_probe(const PointInteraction& op,
                             const std::vector<cd>& k_samples) {
    SpectrumProbe probe;
    const double pts[] = {-2.0, -0.7, -0.1, 0.1, 0.4, 1.3};
    for (const cd& k : k_samples)
        for (double t : pts)
            for (double tp : pts) {
                const cd v = resolvent_kernel(op, k, t, tp);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    probe.all_finite = false;
                probe.max_abs_kernel = std::max(probe.max_abs_kernel, std::abs(v));
            }
    probe.weak_residual = weak_resonance_residual(op);
    return probe;
}

} // namespace qwlim
