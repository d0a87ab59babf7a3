#ifndef QWLIM_POTENTIAL_HPP
#define QWLIM_POTENTIAL_HPP

#include <array>
#include <memory>
#include <vector>

#include "qwlim/geometry.hpp"

namespace qwlim {

/// One constant piece of a piecewise potential: V = value on [from, to).
struct PotentialSegment {
    double value = 0.0;
    double from = 0.0;
    double to = 0.0;
};

/// Compactly supported 1D potential. Either a piecewise-constant
/// descriptor or the analytic rule V = -gamma^2/4 attached to a curvature
/// profile. Values are kept symbolic; grids are chosen by the consumers.
class Potential1D {
public:
    enum class Kind { Piecewise, FromCurvature };

    static Potential1D piecewise(std::vector<PotentialSegment> segments);
    static Potential1D from_curvature(const CurvatureProfile& gamma);
    /// Square well of depth a^2 on (0, b).
    static Potential1D single_well(double a, double b);
    /// Three adjacent wells of depths a_i^2 on (-b1, 0), (0, b2), (b2, b2+b3).
    static Potential1D triple_well(const std::array<double, 3>& a,
                                   const std::array<double, 3>& b);

    double operator()(double t) const;
    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }
    /// Exact integral of V over the line.
    double integral() const;
    Kind kind() const { return kind_; }
    bool is_piecewise() const { return kind_ == Kind::Piecewise; }
    const std::vector<PotentialSegment>& segments() const { return segments_; }
    const CurvatureProfile& curvature() const;
    /// Breakpoints of smooth pieces (support ends included).
    std::vector<double> piece_boundaries() const;
    /// True when V is even about the midpoint of its support.
    bool is_symmetric() const;
    /// Throws HypothesisError unless the support is nontrivial and the
    /// integral of V is nonzero.
    void validate_standing_assumptions() const;

private:
    Potential1D() = default;
    Kind kind_ = Kind::Piecewise;
    std::vector<PotentialSegment> segments_;
    std::shared_ptr<const CurvatureProfile> gamma_;
    double support_min_ = 0.0, support_max_ = 0.0;
};

/// Factorization V = u v with v = |V|^(1/2), u = sgn(V) |V|^(1/2).
struct UVSplit {
    explicit UVSplit(Potential1D potential) : pot(std::move(potential)) {}
    double v(double t) const;
    double u(double t) const;
    Potential1D pot;
};

UVSplit uv_split(const Potential1D& potential);

/// Closed-form a1 completing a resonant triple well with fixed products
/// beta_i = a_i b_i:
///   a1 = (a2^2 tan b2 + a2 a3 tan b3) / (tan b1 (a3 tan b2 tan b3 - a2)).
/// Requires beta1+beta2+beta3 < pi/2 and a positive denominator.
double solve_triple_well_a1(double a2, double a3, double beta1, double beta2,
                            double beta3);

/// Zero-energy matching determinant of the triple well; zero iff resonant.
double triple_well_resonance_residual(const std::array<double, 3>& a,
                                      const std::array<double, 3>& b);

/// Tangent form of the same criterion, valid while all cos(a_i b_i) > 0.
double triple_well_tan_residual(const std::array<double, 3>& a,
                                const std::array<double, 3>& b);

} // namespace qwlim

#endif
