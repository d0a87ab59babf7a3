#ifndef QWLIM_GEOMETRY_HPP
#define QWLIM_GEOMETRY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qwlim {

/// One constant-curvature piece: gamma = value on [from, to).
struct CurvatureSegment {
    double value = 0.0;
    double from = 0.0;
    double to = 0.0;
};

enum class BumpShape { Even, Odd };

/// Signed curvature gamma(t) with compact support. Three families:
///  - piecewise constant segments (contiguous, ordered),
///  - C^2 polynomial bump, peak |gamma| = amplitude; the odd variant has one
///    positive and one negative lobe and zero total turn,
///  - C^1 smoothing of a piecewise profile with quadratic blends of
///    half-width eps^beta around each breakpoint.
class CurvatureProfile {
public:
    enum class Kind { Piecewise, Bump, Smoothed };

    static CurvatureProfile piecewise(std::vector<CurvatureSegment> segments);
    static CurvatureProfile bump(double amplitude, double from, double to,
                                 BumpShape shape = BumpShape::Even);
    static CurvatureProfile smoothed(const CurvatureProfile& piecewise_base,
                                     double eps, double beta);

    double operator()(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    /// Exact cumulative turn: integral of gamma over (-inf, t].
    double angle_up_to(double t) const;
    /// Exact total turn theta = integral of gamma.
    double total_angle() const;

    Kind kind() const { return kind_; }
    double support_min() const { return support_min_; }
    double support_max() const { return support_max_; }
    double sup_abs() const;
    bool is_zero() const;
    /// True when gamma is even about the midpoint of its support.
    bool is_symmetric() const;

    const std::vector<CurvatureSegment>& segments() const { return segments_; }
    double bump_amplitude() const { return amplitude_; }
    BumpShape bump_shape() const { return shape_; }
    double smoothing_eps() const { return eps_; }
    double smoothing_beta() const { return beta_; }
    /// Piece boundaries of the (piecewise-polynomial) profile, support ends
    /// included; quadratures split at these points.
    std::vector<double> piece_boundaries() const;

private:
    CurvatureProfile() = default;

    Kind kind_ = Kind::Piecewise;
    std::vector<CurvatureSegment> segments_; // Piecewise and Smoothed base
    double support_min_ = 0.0, support_max_ = 0.0;
    double amplitude_ = 0.0; // Bump
    BumpShape shape_ = BumpShape::Even;
    double eps_ = 0.0, beta_ = 0.0, delta_ = 0.0; // Smoothed

    double smoothed_value(double t, int order) const;
};

/// Planar curve sampled at uniform arc-length parameters.
struct Polyline {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> angle;
    std::size_t size() const { return t.size(); }
};

/// Integrate the curve from curvature: tangent angle 0 at the far left,
/// start point at the origin. Exact circular arcs on constant pieces,
/// midpoint rule elsewhere. `step` is an upper bound; the actual spacing
/// divides the range evenly.
Polyline reconstruct_curve(const CurvatureProfile& gamma, double t_min,
                           double t_max, double step);

struct CrossingPair {
    std::size_t seg_a = 0;
    std::size_t seg_b = 0;
};

/// First crossing between non-adjacent segments, if any. Deterministic
/// sweep over segment pairs with a bounding-box reject.
std::optional<CrossingPair> first_self_intersection(const Polyline& p);
bool self_intersects(const Polyline& p);

/// Smoothed profile per the quadratic-blend construction; requires
/// eps^beta < half the minimum breakpoint spacing.
CurvatureProfile smooth_curvature(const CurvatureProfile& piecewise_base,
                                  double eps, double beta);

} // namespace qwlim

#endif
