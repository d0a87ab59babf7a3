#ifndef QWLIM_POINT_INTERACTION_HPP
#define QWLIM_POINT_INTERACTION_HPP

#include <complex>
#include <vector>

#include "qwlim/grid.hpp"

namespace qwlim {

/// Limit operator at the vertex: either the scale-invariant family with
/// boundary conditions
///   (c1+c2) f(0+) = (c1-c2) f(0-),  (c1-c2) f'(0+) = (c1+c2) f'(0-),
/// or the Dirichlet-decoupled Laplacian (f(0) = 0). Only the projective
/// class (c1 : c2) matters; every derived quantity is invariant under
/// rescaling of the pair.
class PointInteraction {
public:
    enum class Kind { Resonant, Dirichlet };

    static PointInteraction resonant(double c1, double c2);
    static PointInteraction dirichlet();

    Kind kind() const { return kind_; }
    bool is_dirichlet() const { return kind_ == Kind::Dirichlet; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

private:
    PointInteraction(Kind k, double c1, double c2) : kind_(k), c1_(c1), c2_(c2) {}
    Kind kind_;
    double c1_, c2_;
};

/// Resolvent kernel at spectral parameter k^2 (Im k > 0), in image form:
///   G_k(t-t') + w(sgn t, sgn t') G_k(|t|+|t'|)
/// which keeps the structural cancellations (e.g. the Dirichlet kernel
/// vanishing on the axis t = 0) exact in floating point.
std::complex<double> resolvent_kernel(const PointInteraction& op,
                                      std::complex<double> k, double t, double tp);

/// g = (H - k^2)^{-1} f for f sampled on `src` (trapezoid quadrature),
/// evaluated at `targets` (sorted). Convenience overload evaluates on the
/// source grid itself.
std::vector<std::complex<double>> apply_resolvent(const PointInteraction& op,
                                                  std::complex<double> k,
                                                  const UniformGrid& src,
                                                  const std::vector<double>& f,
                                                  const std::vector<double>& targets);
std::vector<std::complex<double>> apply_resolvent(const PointInteraction& op,
                                                  std::complex<double> k,
                                                  const UniformGrid& src,
                                                  const std::vector<double>& f);
/// Real-arithmetic variant at k = i kappa.
std::vector<double> apply_resolvent_imag_axis(const PointInteraction& op,
                                              double kappa, const UniformGrid& src,
                                              const std::vector<double>& f,
                                              const std::vector<double>& targets);
std::vector<double> apply_resolvent_imag_axis(const PointInteraction& op,
                                              double kappa, const UniformGrid& src,
                                              const std::vector<double>& f);

/// One-sided limits of g and g' at the origin for g = (H - k^2)^{-1} f.
struct BoundaryValues {
    std::complex<double> g0_plus, g0_minus, dg0_plus, dg0_minus;
};
BoundaryValues resolvent_boundary_values(const PointInteraction& op,
                                         std::complex<double> k,
                                         const UniformGrid& src,
                                         const std::vector<double>& f);

/// Schroedinger propagator kernel e^{-itH}(x,y) of the resonant family,
/// time != 0; reduces to the free kernel when c2 = 0.
std::complex<double> propagator_kernel(const PointInteraction& op, double time,
                                       double x, double y);

/// Free propagator kernel e^{-itH0}(x) = (4 pi i t)^{-1/2} e^{i x^2/(4t)}.
std::complex<double> free_propagator(double time, double x);

struct GaussianPacket {
    double center = 0.0;
    double momentum = 0.0;
    double width = 1.0; // sigma
    std::complex<double> value(double y) const;
};

/// Evolve a Gaussian packet through the interaction by kernel quadrature
/// (Simpson over the packet support, truncated at 12 sigma).
std::vector<std::complex<double>> evolve_packet(const PointInteraction& op,
                                                const GaussianPacket& packet,
                                                double time,
                                                const UniformGrid& out,
                                                double quad_step);

/// Generalized eigenfunctions (plane wave incoming from the left for
/// branch +1, from the right for branch -1).
std::complex<double> eigenfunction(const PointInteraction& op, double p,
                                   int branch, double x);

struct ScatteringData {
    double transmission = 0.0;
    double reflection_plus = 0.0;
    double reflection_minus = 0.0;
};

/// Energy-independent scattering amplitudes:
///   T = (c1^2 - c2^2)/(c1^2 + c2^2), R+- = +-2 c1 c2/(c1^2 + c2^2).
/// Dirichlet decoupling reflects each half line with amplitude -1; that
/// entry follows the standard half-line convention, not a coupled S-matrix.
ScatteringData scattering_matrix(const PointInteraction& op);

/// |integral eta'' psi^r| for the step resonance of the operator, with eta
/// running over C^2 core functions obeying the boundary conditions.
double weak_resonance_residual(const PointInteraction& op, double halfwidth = 6.0,
                               int points_per_side = 20000);

/// |integral (-eta'' - p^2 eta) psi_p| for the generalized eigenfunctions.
double weak_eigenfunction_residual(const PointInteraction& op, double p,
                                   int branch, double halfwidth = 6.0,
                                   int points_per_side = 24000);

struct SpectrumProbe {
    bool all_finite = true;
    double max_abs_kernel = 0.0;
    double weak_residual = 0.0; // step resonance against the core
};

/// Scan the resolvent kernel over a grid of spectral points Im k > 0 and
/// run the weak-solution test; finite values support the absence of poles
/// on the sampled set (no completeness claim).
SpectrumProbe spectrum_probe(const PointInteraction& op,
                             const std::vector<std::complex<double>>& k_samples);

} // namespace qwlim

#endif
