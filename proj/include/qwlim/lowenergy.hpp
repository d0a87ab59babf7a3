#ifndef QWLIM_LOWENERGY_HPP
#define QWLIM_LOWENERGY_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qwlim/potential.hpp"
#include "qwlim/quadrature.hpp"

namespace qwlim {

/// Kernel of the free 1D resolvent, (i/2k) e^{ik|t-t'|}; requires Im k > 0.
std::complex<double> free_kernel(std::complex<double> k, double t, double tp);

/// Raw kernel values of m_n at the quadrature nodes:
///   m_n(t,t') = -1/2 u(t) |t-t'|^{n+1}/(n+1)! v(t').
/// Quadrature weights are NOT folded in; see `weighted`.
Eigen::MatrixXd m_kernel(int n, const Quadrature& q, const UVSplit& uv);

/// Symmetrized Nystrom form W^{1/2} K W^{1/2} of a raw kernel matrix; in
/// these coordinates operator composition and norms are plain matrix ones.
Eigen::MatrixXd weighted(const Quadrature& q, const Eigen::MatrixXd& raw_kernel);

/// Rank-one projector P = (v,.)u/(v,u) and Q = 1 - P in symmetrized
/// coordinates. Throws HypothesisError when the discretized (v,u) vanishes.
struct Projectors {
    Eigen::MatrixXd P;
    Eigen::MatrixXd Q;
    double vu = 0.0; // discretized (v,u) = integral of V
};
Projectors projectors(const Quadrature& q, const UVSplit& uv);

/// Smallest singular value and right singular vector of a square matrix,
/// via LU-backed inverse power iteration.
struct SigmaMin {
    double sigma = 0.0;
    Eigen::VectorXd vector;
};
SigmaMin smallest_singular(const Eigen::MatrixXd& S, int max_iter = 160,
                           double tol = 1e-13);

enum class Parity { None, Even, Odd };

struct ResonanceReport {
    bool resonant = false;
    double sigma_min = 0.0;  // smallest singular value of I + Q m0 Q
    double threshold = 0.0;  // declaration threshold max(1e-4, 10/N^2)
    Eigen::VectorXd phi0;    // node values, unit weighted L2 norm, sign-fixed
    double c1 = 0.0, c2 = 0.0;
    double plateau_left = 0.0;  // A = c1 + c2 in the artifact convention
    double plateau_right = 0.0; // B = c1 - c2
    int n_nodes = 0;
    Parity parity = Parity::None;
    double residual = 0.0; // ||(I + Q m0 Q) phi0||
    Quadrature quadrature;
};

/// Zero-energy resonance test: sigma_min of I + Q m0 Q, resonance function
/// and the constants (c1, c2). Sign convention: c1 >= 0, or c2 > 0 when
/// c1 is negligible. Requires n_nodes >= 51.
ResonanceReport detect_resonance(const Potential1D& potential, int n_nodes);

/// Transition operator T(k) = (1 + u G_k v)^{-1} in symmetrized Nystrom
/// coordinates, with a residual check of the defining identity.
struct TransitionOperator {
    Quadrature q;
    Eigen::MatrixXcd T;
    double identity_residual = 0.0; // ||T (I+K) - I||_inf
    std::complex<double> element(const std::function<double(double)>& x,
                                 const std::function<double(double)>& y) const;
};
TransitionOperator transition_operator(const Potential1D& potential,
                                       std::complex<double> k, int n_nodes);

/// Real-arithmetic variant on the positive imaginary axis, k = i kappa.
struct TransitionOperatorReal {
    Quadrature q;
    Eigen::MatrixXd T;
    double element(const std::function<double(double)>& x,
                   const std::function<double(double)>& y) const;
};
TransitionOperatorReal transition_operator_imag_axis(const Potential1D& potential,
                                                     double kappa, int n_nodes);

/// Operator 2-norm of T(i kappa), computed as 1/sigma_min(1 + u G v).
double transition_norm_imag_axis(const Potential1D& potential, double kappa,
                                 int n_nodes);

/// Laurent data of one matrix element around k = 0:
/// element(i kappa) ~ pole/(ik) + constant + linear*(ik), fitted in least
/// squares from samples on the imaginary axis with two guard terms.
struct LaurentCoeffs {
    double pole = 0.0;
    double constant = 0.0;
    double linear = 0.0;
};

struct LaurentReport {
    LaurentCoeffs v_T_u;   // (v, T u)
    LaurentCoeffs xv_T_u;  // ((.)v, T u)
    LaurentCoeffs v_T_ux;  // (v, T u(.))
    LaurentCoeffs xv_T_ux; // ((.)v, T u(.))
    double max_fit_residual = 0.0;
};

LaurentReport laurent_matrix_elements(const Potential1D& potential,
                                      const std::vector<double>& kappas,
                                      int n_nodes);

} // namespace qwlim

#endif
