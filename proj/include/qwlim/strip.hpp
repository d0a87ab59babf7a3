#ifndef QWLIM_STRIP_HPP
#define QWLIM_STRIP_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <memory>
#include <vector>

#include "qwlim/geometry.hpp"
#include "qwlim/point_interaction.hpp"
#include "qwlim/scaled_resolvent.hpp"

namespace qwlim {

/// Curvature-induced potential of the scaled strip:
///   -g^2/(4 D^2) + eps^(a-1) s g''/(2 D^3) - (5/4) eps^(2a-2) s^2 g'^2/D^4,
/// g = gamma(t/eps), D = 1 + eps^(a-1) s gamma(t/eps). At eps = alpha = 1
/// this is the unscaled strip potential. Throws when the tube coordinate
/// denominator D is not positive.
double strip_potential(const CurvatureProfile& gamma, double eps, double alpha,
                       double d, double t, double s);

struct NormalMode {
    int index = 1;
    double lambda_exact = 0.0;    // (n pi / (2 eps^alpha d))^2
    double lambda_discrete = 0.0; // eigenvalue of the FD transverse block
    Eigen::VectorXd profile;      // on interior s-nodes, discretely normalized
};

/// Transverse Dirichlet modes on the interior s-grid (s_points counts both
/// walls). The sampled sine/cosine profiles are exact eigenvectors of the
/// FD block, so discrete orthonormality holds to roundoff.
std::vector<NormalMode> normal_modes(double eps, double alpha, double d,
                                     int s_points, int n_max);

struct StripGridPolicy {
    double fine_step_frac = 1.0 / 40.0; // fine t-step = frac * eps
    double coarse_step = 0.05;
    double growth = 1.15;
    int s_points = 41;          // including both walls
    double support_margin = 1.0; // fine zone pads the scaled support
};

/// Assembled strip Hamiltonian on [-L, L] x [-d, d], Dirichlet walls,
/// in flux (divergence) form, symmetrized so A is exactly symmetric.
struct StripOperator {
    double eps = 0.0, alpha = 0.0, d = 0.0, L = 0.0;
    double h_s = 0.0;
    std::vector<double> t_nodes; // interior
    std::vector<double> t_cell;  // dual cell widths
    std::vector<double> s_nodes; // interior
    Eigen::SparseMatrix<double> A;
    CurvatureProfile gamma;
    int nt() const { return static_cast<int>(t_nodes.size()); }
    int ns() const { return static_cast<int>(s_nodes.size()); }

    StripOperator() : gamma(CurvatureProfile::bump(0.0, -1.0, 1.0)) {}
};

/// Validates the tube condition and the exponent bounds (alpha > 5/2 for
/// C^2 curvature; beta > 3 and alpha > 5/2 + 3 beta/2 for smoothed
/// piecewise curvature) before assembling.
StripOperator assemble_strip(const CurvatureProfile& gamma, double eps,
                             double alpha, double d, double L,
                             const StripGridPolicy& policy);

/// One factorization of (A - k^2 - lambda_m) for source mode m; the shift
/// uses the discrete transverse eigenvalue so the divergence cancels
/// exactly on the grid.
class StripResolvent {
public:
    StripResolvent(const StripOperator& op, int m, std::complex<double> k);
    /// Projection onto mode n of the solution with source f (x) phi_m,
    /// f sampled on the interior t-nodes.
    Eigen::VectorXcd matrix_element(int n, const std::vector<double>& f_on_t) const;
    double lambda_shift() const { return lambda_m_; }

private:
    const StripOperator* op_ = nullptr;
    int m_ = 1;
    double lambda_m_ = 0.0;
    std::vector<NormalMode> modes_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>>> lu_;
};

struct Strip2DOptions {
    double alpha = 3.0;
    double d = 1.0;
    std::complex<double> k = std::complex<double>(0.0, 1.0);
    std::vector<double> eps_list;
    StripGridPolicy policy;
    double decay_headroom = 18.5; // L = probe extent + headroom / Im k
    bool refinement_check = true;
    bool truncation_check = false;
    bool negative_control = true;
    int threads = 1;
    bool verbose = false;
};

struct Strip2DResult {
    ConvergenceTable diagonal;                // (1,1) error vs the limit
    std::vector<ConvergenceRow> offdiagonal;  // (1,2) probe norms
    ConvergenceTable control;                 // vs the wrong limit
    double refinement_delta = -1.0; // diag-error change under step halving
    double truncation_delta = -1.0; // diag-error change under L -> 1.5 L
    double L = 0.0;
};

/// Collapse harness: diagonal regularized matrix elements against the
/// prescribed limit operator, off-diagonal norms, and the bookkeeping
/// checks (grid refinement, truncation, negative control).
Strip2DResult convergence_study_2d(const CurvatureProfile& gamma,
                                   const std::vector<Probe>& probes,
                                   const PointInteraction& limit,
                                   const PointInteraction& control_limit,
                                   const Strip2DOptions& options);

} // namespace qwlim

#endif
