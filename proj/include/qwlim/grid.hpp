#ifndef QWLIM_GRID_HPP
#define QWLIM_GRID_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qwlim {

/// Uniform sampling grid t_j = t0 + j h, j = 0..n-1.
struct UniformGrid {
    double t0 = 0.0;
    double h = 0.0;
    int n = 0;

    static UniformGrid over(double a, double b, double step) {
        if (!(step > 0.0) || !(b > a))
            throw std::invalid_argument("bad grid parameters");
        const int n = static_cast<int>(std::lround((b - a) / step)) + 1;
        return {a, (b - a) / (n - 1), n};
    }
    /// Grid on [-L, L] carrying the origin as an exact node (t0 = -(m h)
    /// makes node(m) = 0 in floating point).
    static UniformGrid symmetric(double half_length, double step) {
        if (!(step > 0.0) || !(half_length > 0.0))
            throw std::invalid_argument("bad grid parameters");
        const int m = std::max(1, static_cast<int>(std::lround(half_length / step)));
        const double h = half_length / m;
        return {-(h * m), h, 2 * m + 1};
    }
    /// Grid symmetric about the origin with the origin at a cell center.
    /// Trapezoid sums of integrands that jump at the origin then stay
    /// second-order accurate without any one-sided bookkeeping.
    static UniformGrid symmetric_staggered(double half_length, double step) {
        if (!(step > 0.0) || !(half_length > 0.0))
            throw std::invalid_argument("bad grid parameters");
        const int m = std::max(1, static_cast<int>(std::lround(half_length / step)));
        const double h = half_length / m;
        return {-(h * (m - 0.5)), h, 2 * m};
    }
    double node(int j) const { return t0 + h * j; }
    double back() const { return node(n - 1); }
    /// Trapezoid quadrature weight of node j.
    double weight(int j) const { return (j == 0 || j == n - 1) ? 0.5 * h : h; }
};

template <class S>
double grid_l2_norm(const UniformGrid& g, const std::vector<S>& f) {
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) acc += g.weight(j) * std::norm(std::complex<double>(f[j]));
    return std::sqrt(acc);
}

inline double grid_l2_norm(const UniformGrid& g, const std::vector<double>& f) {
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) acc += g.weight(j) * f[j] * f[j];
    return std::sqrt(acc);
}

/// Exponential sums S(x_i) = sum_j E(|x_i - y_j|) q_j for sorted targets x
/// and sorted sources y, where E(d) = decay(d) is multiplicative over
/// distances (e^{ikd}). Two linear sweeps; every factor has modulus <= 1,
/// so the accumulation never overflows.
template <class Scalar, class Decay>
std::vector<Scalar> exponential_sums(const std::vector<double>& targets,
                                     const std::vector<double>& sources,
                                     const std::vector<Scalar>& charges,
                                     Decay decay) {
    const std::size_t nt = targets.size(), ns = sources.size();
    std::vector<Scalar> out(nt, Scalar(0));

    // left pass: sources with y <= x
    {
        Scalar acc(0);
        double pos = 0.0;
        bool started = false;
        std::size_t is = 0;
        for (std::size_t it = 0; it < nt; ++it) {
            const double x = targets[it];
            while (is < ns && sources[is] <= x) {
                if (started) acc *= decay(sources[is] - pos);
                pos = sources[is];
                started = true;
                acc += charges[is];
                ++is;
            }
            if (started) {
                acc *= decay(x - pos);
                pos = x;
                out[it] += acc;
            }
        }
    }
    // right pass: sources with y > x, strictly
    {
        Scalar acc(0);
        double pos = 0.0;
        bool started = false;
        std::size_t is = ns;
        for (std::size_t it = nt; it-- > 0;) {
            const double x = targets[it];
            while (is > 0 && sources[is - 1] > x) {
                if (started) acc *= decay(pos - sources[is - 1]);
                pos = sources[is - 1];
                started = true;
                acc += charges[is - 1];
                --is;
            }
            if (started) {
                acc *= decay(pos - x);
                pos = x;
                out[it] += acc;
            }
        }
    }
    return out;
}

/// sum_j e^{ik|x_i - y_j|} q_j, Im k > 0.
inline std::vector<std::complex<double>> greens_sums(
    std::complex<double> k, const std::vector<double>& targets,
    const std::vector<double>& sources,
    const std::vector<std::complex<double>>& charges) {
    const std::complex<double> ik(0.0, 1.0);
    return exponential_sums(targets, sources, charges, [=](double d) {
        return std::exp(ik * k * d);
    });
}

/// sum_j e^{-kappa |x_i - y_j|} q_j (the k = i kappa axis, real arithmetic).
inline std::vector<double> greens_sums_imag_axis(double kappa,
                                                 const std::vector<double>& targets,
                                                 const std::vector<double>& sources,
                                                 const std::vector<double>& charges) {
    return exponential_sums(targets, sources, charges,
                            [=](double d) { return std::exp(-kappa * d); });
}

} // namespace qwlim

#endif
