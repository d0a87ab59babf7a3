#ifndef QWLIM_NUMERIC_HPP
#define QWLIM_NUMERIC_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace qwlim {

/// C^2 polynomial bump: (1-y^2)^3 on |y|<1, zero outside. Peak 1 at y=0.
inline double poly_bump(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double w = 1.0 - y * y;
    return w * w * w;
}

inline double poly_bump_d1(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double w = 1.0 - y * y;
    return -6.0 * y * w * w;
}

inline double poly_bump_d2(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double w = 1.0 - y * y;
    return w * (30.0 * y * y - 6.0);
}

/// Quintic smoothstep with s(0)=0, s(1)=1 and vanishing first and second
/// derivatives at both ends.
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline double smoothstep5_d1(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = u * (1.0 - u);
    return 30.0 * w * w;
}

inline double smoothstep5_d2(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

/// 8-point Gauss-Legendre rule on [-1,1]; exact for polynomials up to
/// degree 15, which covers every piecewise-polynomial profile used here.
inline double gauss8(const std::function<double(double)>& f, double a, double b) {
    static const std::array<double, 4> x = {
        0.1834346424956498049394761,
        0.5255324099163289858177390,
        0.7966664774136267395915539,
        0.9602898564975362316835609};
    static const std::array<double, 4> w = {
        0.3626837833783619829651504,
        0.3137066458778872873379622,
        0.2223810344533744705443560,
        0.1012285362903762591525314};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
        sum += w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
    return half * sum;
}

/// Brent root finder on [lo, hi]; f(lo) and f(hi) must have opposite signs.
/// Returns the abscissa; max_iter and rel_tol control termination.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol = 1e-14, int max_iter = 200);

/// Deterministic pseudo-random doubles in (-1,1); used to seed power
/// iterations without tie-breaking symmetry accidents.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double next_signed_unit() {
        return 2.0 * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53) - 1.0;
    }

private:
    std::uint64_t state_;
};

/// Least-squares slope/intercept of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y);

} // namespace qwlim

#endif
