#include "qwlim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

namespace {

constexpr double kContiguityTol = 1e-12;

// Peak of |x (1-x^2)^3| on [-1,1], attained at x = 1/sqrt(7).
const double kOddShapePeak = (216.0 / 343.0) / std::sqrt(7.0);

// Normalized bump shapes on [-1,1] and their derivatives / integrals.
double shape_value(BumpShape s, double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double w = 1.0 - x * x;
    const double w3 = w * w * w;
    if (s == BumpShape::Even) return w3;
    return x * w3 / kOddShapePeak;
}

double shape_d1(BumpShape s, double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double w = 1.0 - x * x;
    if (s == BumpShape::Even) return -6.0 * x * w * w;
    return w * w * (1.0 - 7.0 * x * x) / kOddShapePeak;
}

double shape_d2(BumpShape s, double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double w = 1.0 - x * x;
    if (s == BumpShape::Even) return w * (30.0 * x * x - 6.0);
    return -6.0 * x * w * (3.0 - 7.0 * x * x) / kOddShapePeak;
}

// Antiderivative of the shape with value 0 at x = -1.
double shape_cumulative(BumpShape s, double x) {
    if (x <= -1.0) return 0.0;
    const double xc = std::min(x, 1.0);
    if (s == BumpShape::Even) {
        // integral of (1-x^2)^3 = x - x^3 + 3x^5/5 - x^7/7
        auto F = [](double y) {
            return y - y * y * y + 0.6 * std::pow(y, 5) - std::pow(y, 7) / 7.0;
        };
        return F(xc) - F(-1.0);
    }
    // integral of x (1-x^2)^3 = -(1-x^2)^4 / 8
    const double w = 1.0 - xc * xc;
    return -(w * w * w * w) / 8.0 / kOddShapePeak;
}

} // namespace

CurvatureProfile CurvatureProfile::piecewise(std::vector<CurvatureSegment> segments) {
    if (segments.empty())
        throw std::invalid_argument("piecewise curvature needs at least one segment");
    for (const auto& s : segments)
        if (!(s.to > s.from))
            throw std::invalid_argument("curvature segment has non-positive length");
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].from < segments[i - 1].from)
            throw std::invalid_argument("curvature segments out of order");
        if (std::abs(segments[i].from - segments[i - 1].to) > kContiguityTol)
            throw std::invalid_argument("curvature segments must be contiguous");
        segments[i].from = segments[i - 1].to; // snap
    }
    CurvatureProfile p;
    p.kind_ = Kind::Piecewise;
    p.segments_ = std::move(segments);
    p.support_min_ = p.segments_.front().from;
    p.support_max_ = p.segments_.back().to;
    return p;
}

CurvatureProfile CurvatureProfile::bump(double amplitude, double from, double to,
                                        BumpShape shape) {
    if (!(to > from))
        throw std::invalid_argument("bump support is degenerate");
    CurvatureProfile p;
    p.kind_ = Kind::Bump;
    p.amplitude_ = amplitude;
    p.shape_ = shape;
    p.support_min_ = from;
    p.support_max_ = to;
    return p;
}

CurvatureProfile CurvatureProfile::smoothed(const CurvatureProfile& base,
                                            double eps, double beta) {
    if (base.kind_ != Kind::Piecewise)
        throw std::invalid_argument("smoothing applies to piecewise curvature");
    if (!(eps > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("smoothing needs eps > 0 and beta > 0");
    const double delta = std::pow(eps, beta);
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : base.segments_) min_gap = std::min(min_gap, s.to - s.from);
    if (!(delta < 0.5 * min_gap))
        throw HypothesisError(
            "smoothing half-width eps^beta must stay below half the minimum "
            "breakpoint spacing");
    CurvatureProfile p;
    p.kind_ = Kind::Smoothed;
    p.segments_ = base.segments_;
    p.eps_ = eps;
    p.beta_ = beta;
    p.delta_ = delta;
    p.support_min_ = base.support_min_ - delta;
    p.support_max_ = base.support_max_ + delta;
    return p;
}

CurvatureProfile smooth_curvature(const CurvatureProfile& base, double eps, double beta) {
    return CurvatureProfile::smoothed(base, eps, beta);
}

// Quadratic blend between c_i (left) and c_next (right) around breakpoint xi,
// half-width delta; order = 0,1,2 selects value/derivative.
static double blend(double t, double xi, double delta, double ci, double cnext,
                    int order) {
    const double jump = cnext - ci;
    const double u = t - xi;
    const double sgn = (u <= 0.0) ? 1.0 : -1.0;
    switch (order) {
        case 0:
            return sgn * jump / (2.0 * delta * delta) * u * u + jump / delta * u +
                   0.5 * (ci + cnext);
        case 1:
            return sgn * jump / (delta * delta) * u + jump / delta;
        default:
            return sgn * jump / (delta * delta);
    }
}

double CurvatureProfile::smoothed_value(double t, int order) const {
    if (t <= support_min_ || t >= support_max_) return 0.0;
    // breakpoints x_0..x_n with flanking constants c_0 = c_{n+1} = 0
    const auto& segs = segments_;
    const std::size_t n = segs.size();
    for (std::size_t i = 0; i <= n; ++i) {
        const double xi = (i == 0) ? segs.front().from : segs[i - 1].to;
        if (t < xi - delta_) {
            // inside the constant part of piece i (i >= 1 here)
            return (order == 0 && i >= 1) ? segs[i - 1].value : 0.0;
        }
        if (t <= xi + delta_) {
            const double ci = (i == 0) ? 0.0 : segs[i - 1].value;
            const double cn = (i == n) ? 0.0 : segs[i].value;
            return blend(t, xi, delta_, ci, cn, order);
        }
    }
    return (order == 0) ? segs.back().value : 0.0; // unreachable in practice
}

double CurvatureProfile::operator()(double t) const {
    switch (kind_) {
        case Kind::Piecewise: {
            if (t < support_min_ || t >= support_max_) return 0.0;
            for (const auto& s : segments_)
                if (t < s.to) return s.value;
            return 0.0;
        }
        case Kind::Bump: {
            const double mid = 0.5 * (support_min_ + support_max_);
            const double half = 0.5 * (support_max_ - support_min_);
            return amplitude_ * shape_value(shape_, (t - mid) / half);
        }
        case Kind::Smoothed:
            return smoothed_value(t, 0);
    }
    return 0.0;
}

double CurvatureProfile::derivative(double t) const {
    switch (kind_) {
        case Kind::Piecewise:
            return 0.0; // a.e.
        case Kind::Bump: {
            const double mid = 0.5 * (support_min_ + support_max_);
            const double half = 0.5 * (support_max_ - support_min_);
            return amplitude_ * shape_d1(shape_, (t - mid) / half) / half;
        }
        case Kind::Smoothed:
            return smoothed_value(t, 1);
    }
    return 0.0;
}

double CurvatureProfile::second_derivative(double t) const {
    switch (kind_) {
        case Kind::Piecewise:
            return 0.0; // a.e.
        case Kind::Bump: {
            const double mid = 0.5 * (support_min_ + support_max_);
            const double half = 0.5 * (support_max_ - support_min_);
            return amplitude_ * shape_d2(shape_, (t - mid) / half) / (half * half);
        }
        case Kind::Smoothed:
            return smoothed_value(t, 2);
    }
    return 0.0;
}

double CurvatureProfile::angle_up_to(double t) const {
    switch (kind_) {
        case Kind::Piecewise: {
            double acc = 0.0;
            for (const auto& s : segments_) {
                if (t <= s.from) break;
                acc += s.value * (std::min(t, s.to) - s.from);
            }
            return acc;
        }
        case Kind::Bump: {
            const double mid = 0.5 * (support_min_ + support_max_);
            const double half = 0.5 * (support_max_ - support_min_);
            return amplitude_ * half * shape_cumulative(shape_, (t - mid) / half);
        }
        case Kind::Smoothed: {
            // walk blend windows and constant stretches left to right;
            // gauss8 is exact on the quadratic blends
            double acc = 0.0;
            const auto& segs = segments_;
            const std::size_t n = segs.size();
            for (std::size_t i = 0; i <= n; ++i) {
                const double xi = (i == 0) ? segs.front().from : segs[i - 1].to;
                if (t <= xi - delta_) break;
                const double ci = (i == 0) ? 0.0 : segs[i - 1].value;
                const double cn = (i == n) ? 0.0 : segs[i].value;
                const double hi = std::min(t, xi + delta_);
                acc += gauss8([&](double s) { return blend(s, xi, delta_, ci, cn, 0); },
                              xi - delta_, hi);
                // constant stretch of piece i+1 entered so far
                if (i < n) {
                    const double c_from = xi + delta_;
                    const double c_to = std::min(t, segs[i].to - delta_);
                    if (c_to > c_from) acc += segs[i].value * (c_to - c_from);
                }
            }
            return acc;
        }
    }
    return 0.0;
}

double CurvatureProfile::total_angle() const { return angle_up_to(support_max_); }

double CurvatureProfile::sup_abs() const {
    switch (kind_) {
        case Kind::Piecewise: {
            double m = 0.0;
            for (const auto& s : segments_) m = std::max(m, std::abs(s.value));
            return m;
        }
        case Kind::Bump:
            return std::abs(amplitude_);
        case Kind::Smoothed: {
            double m = 0.0;
            for (const auto& s : segments_) m = std::max(m, std::abs(s.value));
            return m; // blends are monotone between adjacent constants
        }
    }
    return 0.0;
}

bool CurvatureProfile::is_zero() const {
    if (kind_ == Kind::Bump) return amplitude_ == 0.0;
    for (const auto& s : segments_)
        if (s.value != 0.0) return false;
    return true;
}

bool CurvatureProfile::is_symmetric() const {
    if (kind_ == Kind::Bump) return shape_ == BumpShape::Even;
    const double mid = 0.5 * (support_min_ + support_max_);
    const int n = 64;
    const double half = 0.5 * (support_max_ - support_min_);
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.37) * half / n;
        if (std::abs((*this)(mid + x) - (*this)(mid - x)) >
            1e-10 * (1.0 + sup_abs()))
            return false;
    }
    return true;
}

std::vector<double> CurvatureProfile::piece_boundaries() const {
    std::vector<double> b;
    switch (kind_) {
        case Kind::Piecewise:
            b.push_back(segments_.front().from);
            for (const auto& s : segments_) b.push_back(s.to);
            break;
        case Kind::Bump:
            b = {support_min_, support_max_};
            break;
        case Kind::Smoothed: {
            b.push_back(support_min_);
            const std::size_t n = segments_.size();
            for (std::size_t i = 0; i <= n; ++i) {
                const double xi =
                    (i == 0) ? segments_.front().from : segments_[i - 1].to;
                b.push_back(xi - delta_);
                b.push_back(xi);
                b.push_back(xi + delta_);
            }
            b.push_back(support_max_);
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end(),
                                [](double a, double c) { return std::abs(a - c) < 1e-15; }),
                    b.end());
            break;
        }
    }
    return b;
}

Polyline reconstruct_curve(const CurvatureProfile& gamma, double t_min,
                           double t_max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (!(t_max > t_min)) throw std::invalid_argument("degenerate parameter range");
    if (t_min > gamma.support_min() + 1e-12 || t_max < gamma.support_max() - 1e-12)
        throw std::invalid_argument("range must cover the curvature support");

    const auto n = static_cast<std::size_t>(std::ceil((t_max - t_min) / step - 1e-9));
    const double h = (t_max - t_min) / static_cast<double>(n);

    Polyline p;
    p.t.resize(n + 1);
    p.x.resize(n + 1);
    p.y.resize(n + 1);
    p.angle.resize(n + 1);

    const double phi0 = gamma.angle_up_to(t_min);
    p.t[0] = t_min;
    p.x[0] = 0.0;
    p.y[0] = 0.0;
    p.angle[0] = phi0;

    // Constant pieces admit exact arcs when a step stays inside one piece.
    const bool exact_arcs = gamma.kind() == CurvatureProfile::Kind::Piecewise;
    auto piece_value = [&](double a, double b, double* value) {
        if (!exact_arcs) return false;
        double lo = gamma.support_min(), hi = gamma.support_max();
        if (b <= lo || a >= hi) {
            *value = 0.0;
            return true;
        }
        for (const auto& s : gamma.segments()) {
            if (a >= s.from - 1e-15 && b <= s.to + 1e-15) {
                *value = s.value;
                return true;
            }
        }
        return false;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double ta = t_min + static_cast<double>(i) * h;
        const double tb = ta + h;
        const double phi_a = p.angle[i];
        double v = 0.0;
        if (piece_value(ta, tb, &v)) {
            if (v == 0.0) {
                p.x[i + 1] = p.x[i] + h * std::cos(phi_a);
                p.y[i + 1] = p.y[i] + h * std::sin(phi_a);
            } else {
                const double phi_b = phi_a + v * h;
                p.x[i + 1] = p.x[i] + (std::sin(phi_b) - std::sin(phi_a)) / v;
                p.y[i + 1] = p.y[i] - (std::cos(phi_b) - std::cos(phi_a)) / v;
            }
        } else {
            const double phi_m = gamma.angle_up_to(0.5 * (ta + tb));
            p.x[i + 1] = p.x[i] + h * std::cos(phi_m);
            p.y[i + 1] = p.y[i] + h * std::sin(phi_m);
        }
        p.t[i + 1] = tb;
        p.angle[i + 1] = gamma.angle_up_to(tb);
    }
    return p;
}

namespace {

int orientation(double ax, double ay, double bx, double by, double cx, double cy) {
    const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    const double scale = std::abs(bx - ax) + std::abs(by - ay) + std::abs(cx - ax) +
                         std::abs(cy - ay);
    if (std::abs(v) <= 1e-15 * scale * scale) return 0;
    return v > 0.0 ? 1 : -1;
}

bool on_segment(double ax, double ay, double bx, double by, double px, double py) {
    return std::min(ax, bx) - 1e-15 <= px && px <= std::max(ax, bx) + 1e-15 &&
           std::min(ay, by) - 1e-15 <= py && py <= std::max(ay, by) + 1e-15;
}

bool segments_cross(double ax, double ay, double bx, double by, double cx,
                    double cy, double dx, double dy) {
    const int o1 = orientation(ax, ay, bx, by, cx, cy);
    const int o2 = orientation(ax, ay, bx, by, dx, dy);
    const int o3 = orientation(cx, cy, dx, dy, ax, ay);
    const int o4 = orientation(cx, cy, dx, dy, bx, by);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(ax, ay, bx, by, cx, cy)) return true;
    if (o2 == 0 && on_segment(ax, ay, bx, by, dx, dy)) return true;
    if (o3 == 0 && on_segment(cx, cy, dx, dy, ax, ay)) return true;
    if (o4 == 0 && on_segment(cx, cy, dx, dy, bx, by)) return true;
    return false;
}

} // namespace

std::optional<CrossingPair> first_self_intersection(const Polyline& p) {
    const std::size_t n = p.size();
    if (n < 3) throw std::invalid_argument("polyline needs at least 2 segments");
    const std::size_t m = n - 1; // segment count
    for (std::size_t i = 0; i + 2 < m + 1; ++i) {
        const double ax = p.x[i], ay = p.y[i], bx = p.x[i + 1], by = p.y[i + 1];
        const double ilo_x = std::min(ax, bx), ihi_x = std::max(ax, bx);
        const double ilo_y = std::min(ay, by), ihi_y = std::max(ay, by);
        for (std::size_t j = i + 2; j < m; ++j) {
            const double cx = p.x[j], cy = p.y[j], dx = p.x[j + 1], dy = p.y[j + 1];
            if (std::max(cx, dx) < ilo_x || std::min(cx, dx) > ihi_x ||
                std::max(cy, dy) < ilo_y || std::min(cy, dy) > ihi_y)
                continue;
            if (segments_cross(ax, ay, bx, by, cx, cy, dx, dy))
                return CrossingPair{i, j};
        }
    }
    return std::nullopt;
}

bool self_intersects(const Polyline& p) { return first_self_intersection(p).has_value(); }

} // namespace qwlim
