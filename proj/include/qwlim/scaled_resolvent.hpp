#ifndef QWLIM_SCALED_RESOLVENT_HPP
#define QWLIM_SCALED_RESOLVENT_HPP

#include <complex>
#include <string>
#include <vector>

#include "qwlim/grid.hpp"
#include "qwlim/point_interaction.hpp"
#include "qwlim/potential.hpp"

namespace qwlim {

/// C^2 polynomial probe bump, amplitude * (1 - y^2)^3 with y centered.
struct Probe {
    double center = 0.0;
    double halfwidth = 1.0;
    double amplitude = 1.0;
    double value(double t) const;
};

/// Five bumps at assorted centers and widths inside [-10, 10].
std::vector<Probe> default_probe_battery();

/// (H_eps - k^2)^{-1} f through the factorized resolvent formula
///   G_k - (1/eps) A_eps(k) T(eps k) C_eps(k),
/// with the inner integrals on an n_quad-node midpoint rule over supp V.
/// f is sampled on `grid` (trapezoid weights). eps = 1 gives the unscaled
/// resolvent of -d^2/dt^2 + V.
std::vector<std::complex<double>> apply_scaled_resolvent(
    const Potential1D& potential, double eps, std::complex<double> k,
    const UniformGrid& grid, const std::vector<double>& f, int n_quad = 801);

/// Real-arithmetic variant at k = i kappa.
std::vector<double> apply_scaled_resolvent_imag_axis(
    const Potential1D& potential, double eps, double kappa,
    const UniformGrid& grid, const std::vector<double>& f, int n_quad = 801);

struct ConvergenceRow {
    double eps = 0.0;
    double error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;     // fitted d log(err) / d log(eps)
    double intercept = 0.0;
    double fit_residual = 0.0;
    bool monotone = false;  // errors strictly decreasing along decreasing eps
    std::string limit_kind; // "resonant" / "dirichlet"
};

/// Probe-max error of the scaled resolvent against a prescribed limit
/// operator at k = i kappa, per eps, with a log-log rate fit. eps_list
/// must be decreasing; the limit is chosen by the caller (resonance
/// detection + constants), so a wrong limit serves as a negative control.
ConvergenceTable convergence_study_1d(const Potential1D& potential, double kappa,
                                      const std::vector<double>& eps_list,
                                      const std::vector<Probe>& probes,
                                      const PointInteraction& limit,
                                      const UniformGrid& grid, int n_quad = 801,
                                      int threads = 1);

} // namespace qwlim

#endif
