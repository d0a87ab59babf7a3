#ifndef QWLIM_SHOOTING_HPP
#define QWLIM_SHOOTING_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "qwlim/potential.hpp"

namespace qwlim {

/// Zero-energy shot across the support: psi'' = V psi with (psi, psi') =
/// (1, 0) at the left edge. The solution is constant to the left; it is
/// bounded on the right (a resonance) exactly when end_slope vanishes.
struct ShootResult {
    double plateau_left = 1.0;  // by the initial data
    double plateau_right = 0.0; // psi at the right support edge
    double end_slope = 0.0;     // psi' at the right support edge
    std::vector<std::array<double, 3>> trace; // (t, psi, psi')
    bool resonant(double tol = 1e-9) const;
};

enum class ShootMethod { Auto, ExactPropagator, RungeKutta };

/// Piecewise-constant potentials compose exact 2x2 interval propagators;
/// anything else integrates with fixed-step RK4, stepping piece by piece.
ShootResult shoot_zero_energy(const Potential1D& potential, int steps = 4000,
                              ShootMethod method = ShootMethod::Auto);

/// Root function for resonance hunting: the end slope of the shot.
double resonance_margin(const Potential1D& potential, int steps = 4000);

/// Brent search for a resonance of a one-parameter family; the margin must
/// change sign over [lo, hi].
double tune_to_resonance(const std::function<Potential1D(double)>& family,
                         double lo, double hi, int steps = 4000,
                         double rel_tol = 1e-14, int max_iter = 200);

/// Resonance constants from the plateaus: (c1, c2) = ((A+B)/2, (A-B)/2).
/// Cross-validated against the quadrature route of the resonance equation;
/// throws when called on a non-resonant shot.
std::pair<double, double> constants_from_asymptotics(const ShootResult& shot,
                                                     double tol = 1e-6);

} // namespace qwlim

#endif
