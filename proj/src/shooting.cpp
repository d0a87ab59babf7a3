#include "qwlim/shooting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

bool ShootResult::resonant(double tol) const { return std::abs(end_slope) < tol; }

namespace {

// propagate (psi, psi') across one interval of constant V
void step_constant(double V, double len, double& psi, double& dpsi) {
    if (V == 0.0) {
        psi += len * dpsi;
        return;
    }
    if (V < 0.0) {
        const double a = std::sqrt(-V);
        const double c = std::cos(a * len), s = std::sin(a * len);
        const double p = psi, dp = dpsi;
        psi = c * p + s / a * dp;
        dpsi = -a * s * p + c * dp;
    } else {
        const double g = std::sqrt(V);
        const double c = std::cosh(g * len), s = std::sinh(g * len);
        const double p = psi, dp = dpsi;
        psi = c * p + s / g * dp;
        dpsi = g * s * p + c * dp;
    }
}

// RK4 on (psi, psi')' = (psi', V psi); stage points are clamped to the
// current piece so the rightmost stage never samples the next piece
void step_rk4(const Potential1D& V, double piece_end, double t, double h,
              double& psi, double& dpsi) {
    const double inside =
        std::nextafter(piece_end, -std::numeric_limits<double>::infinity());
    auto f = [&](double tt, double p, double dp, double& kp, double& kdp) {
        kp = dp;
        kdp = V(std::min(tt, inside)) * p;
    };
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
    f(t, psi, dpsi, k1p, k1d);
    f(t + 0.5 * h, psi + 0.5 * h * k1p, dpsi + 0.5 * h * k1d, k2p, k2d);
    f(t + 0.5 * h, psi + 0.5 * h * k2p, dpsi + 0.5 * h * k2d, k3p, k3d);
    f(t + h, psi + h * k3p, dpsi + h * k3d, k4p, k4d);
    psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
}

} // namespace

ShootResult shoot_zero_energy(const Potential1D& potential, int steps,
                              ShootMethod method) {
    if (steps < 1000 && method != ShootMethod::ExactPropagator)
        throw std::invalid_argument("zero-energy shot needs at least 1000 steps");
    const bool exact = (method == ShootMethod::ExactPropagator) ||
                       (method == ShootMethod::Auto && potential.is_piecewise());

    ShootResult res;
    double psi = 1.0, dpsi = 0.0;
    res.trace.push_back({potential.support_min(), psi, dpsi});

    if (exact) {
        if (!potential.is_piecewise())
            throw std::invalid_argument("exact propagators need a piecewise potential");
        for (const auto& s : potential.segments()) {
            step_constant(s.value, s.to - s.from, psi, dpsi);
            res.trace.push_back({s.to, psi, dpsi});
        }
    } else {
        const auto bounds = potential.piece_boundaries();
        const double total = bounds.back() - bounds.front();
        for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
            const double len = bounds[p + 1] - bounds[p];
            const int n = std::max(8, static_cast<int>(std::lround(steps * len / total)));
            const double h = len / n;
            for (int j = 0; j < n; ++j) {
                step_rk4(potential, bounds[p + 1], bounds[p] + j * h, h, psi, dpsi);
                res.trace.push_back({bounds[p] + (j + 1) * h, psi, dpsi});
            }
        }
    }
    res.plateau_right = psi;
    res.end_slope = dpsi;
    return res;
}

double resonance_margin(const Potential1D& potential, int steps) {
    return shoot_zero_energy(potential, steps).end_slope;
}

double tune_to_resonance(const std::function<Potential1D(double)>& family,
                         double lo, double hi, int steps, double rel_tol,
                         int max_iter) {
    auto margin = [&](double p) { return resonance_margin(family(p), steps); };
    const double mlo = margin(lo), mhi = margin(hi);
    if ((mlo > 0.0) == (mhi > 0.0))
        throw SolverError("resonance margin does not change sign over the bracket");
    return brent_root(margin, lo, hi, rel_tol, max_iter);
}

std::pair<double, double> constants_from_asymptotics(const ShootResult& shot,
                                                     double tol) {
    if (!shot.resonant(tol))
        throw std::invalid_argument(
            "resonance constants are defined only for a resonant shot");
    const double A = shot.plateau_left, B = shot.plateau_right;
    return {0.5 * (A + B), 0.5 * (A - B)};
}

} // namespace qwlim
