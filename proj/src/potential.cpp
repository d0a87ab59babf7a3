#include "qwlim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qwlim/errors.hpp"
#include "qwlim/numeric.hpp"

namespace qwlim {

Potential1D Potential1D::piecewise(std::vector<PotentialSegment> segments) {
    if (segments.empty())
        throw std::invalid_argument("piecewise potential needs at least one segment");
    for (const auto& s : segments)
        if (!(s.to > s.from))
            throw std::invalid_argument("potential segment has non-positive length");
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (std::abs(segments[i].from - segments[i - 1].to) > 1e-12)
            throw std::invalid_argument("potential segments must be contiguous");
        segments[i].from = segments[i - 1].to;
    }
    // coalesce equal-depth neighbors (different curvatures share one well)
    std::vector<PotentialSegment> merged;
    for (const auto& s : segments) {
        if (!merged.empty() &&
            std::abs(merged.back().value - s.value) <=
                1e-14 * (1.0 + std::abs(s.value)))
            merged.back().to = s.to;
        else
            merged.push_back(s);
    }
    Potential1D p;
    p.kind_ = Kind::Piecewise;
    p.segments_ = std::move(merged);
    p.support_min_ = p.segments_.front().from;
    p.support_max_ = p.segments_.back().to;
    return p;
}

Potential1D Potential1D::from_curvature(const CurvatureProfile& gamma) {
    if (gamma.is_zero())
        throw HypothesisError(
            "vanishing curvature gives integral(V) = 0, which violates the "
            "standing assumption on the potential");
    if (gamma.kind() == CurvatureProfile::Kind::Piecewise) {
        std::vector<PotentialSegment> segs;
        for (const auto& s : gamma.segments())
            segs.push_back({-0.25 * s.value * s.value, s.from, s.to});
        return piecewise(std::move(segs));
    }
    Potential1D p;
    p.kind_ = Kind::FromCurvature;
    p.gamma_ = std::make_shared<CurvatureProfile>(gamma);
    p.support_min_ = gamma.support_min();
    p.support_max_ = gamma.support_max();
    return p;
}

Potential1D Potential1D::single_well(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("square well needs a > 0 and b > 0");
    return piecewise({{-a * a, 0.0, b}});
}

Potential1D Potential1D::triple_well(const std::array<double, 3>& a,
                                     const std::array<double, 3>& b) {
    for (int i = 0; i < 3; ++i)
        if (!(a[i] > 0.0) || !(b[i] > 0.0))
            throw std::invalid_argument("triple well needs positive parameters");
    return piecewise({{-a[0] * a[0], -b[0], 0.0},
                      {-a[1] * a[1], 0.0, b[1]},
                      {-a[2] * a[2], b[1], b[1] + b[2]}});
}

double Potential1D::operator()(double t) const {
    if (t < support_min_ || t >= support_max_) return 0.0;
    if (kind_ == Kind::Piecewise) {
        for (const auto& s : segments_)
            if (t < s.to) return s.value;
        return 0.0;
    }
    const double g = (*gamma_)(t);
    return -0.25 * g * g;
}

double Potential1D::integral() const {
    if (kind_ == Kind::Piecewise) {
        double acc = 0.0;
        for (const auto& s : segments_) acc += s.value * (s.to - s.from);
        return acc;
    }
    // -1/4 integral gamma^2; gauss8 per polynomial piece is exact here
    const auto bounds = gamma_->piece_boundaries();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        acc += gauss8(
            [&](double t) {
                const double g = (*gamma_)(t);
                return -0.25 * g * g;
            },
            bounds[i], bounds[i + 1]);
    return acc;
}

const CurvatureProfile& Potential1D::curvature() const {
    if (!gamma_) throw std::logic_error("potential has no attached curvature");
    return *gamma_;
}

std::vector<double> Potential1D::piece_boundaries() const {
    if (kind_ == Kind::Piecewise) {
        std::vector<double> b;
        b.push_back(segments_.front().from);
        for (const auto& s : segments_) b.push_back(s.to);
        return b;
    }
    return gamma_->piece_boundaries();
}

bool Potential1D::is_symmetric() const {
    const double mid = 0.5 * (support_min_ + support_max_);
    if (kind_ == Kind::Piecewise) {
        const auto& s = segments_;
        const std::size_t n = s.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = s[i];
            const auto& b = s[n - 1 - i];
            if (std::abs(a.value - b.value) > 1e-14 * (1.0 + std::abs(a.value)))
                return false;
            if (std::abs((a.from - mid) + (b.to - mid)) > 1e-12) return false;
        }
        return true;
    }
    const double half = 0.5 * (support_max_ - support_min_);
    double scale = 0.0;
    for (int i = 0; i < 64; ++i)
        scale = std::max(scale, std::abs((*this)(mid + (i + 0.37) * half / 64)));
    for (int i = 0; i < 64; ++i) {
        const double x = (i + 0.37) * half / 64;
        if (std::abs((*this)(mid + x) - (*this)(mid - x)) > 1e-10 * (1.0 + scale))
            return false;
    }
    return true;
}

void Potential1D::validate_standing_assumptions() const {
    if (!(support_max_ > support_min_))
        throw HypothesisError("potential must have nontrivial compact support");
    const double I = integral();
    if (std::abs(I) < 1e-14 * (support_max_ - support_min_))
        throw HypothesisError("integral of V vanishes, violating the standing "
                              "assumption integral(V) != 0");
}

double UVSplit::v(double t) const { return std::sqrt(std::abs(pot(t))); }

double UVSplit::u(double t) const {
    const double V = pot(t);
    if (V == 0.0) return 0.0;
    return (V > 0.0 ? 1.0 : -1.0) * std::sqrt(std::abs(V));
}

UVSplit uv_split(const Potential1D& potential) { return UVSplit(potential); }

double solve_triple_well_a1(double a2, double a3, double beta1, double beta2,
                            double beta3) {
    if (!(a2 > 0.0) || !(a3 > 0.0))
        throw std::invalid_argument("need a2 > 0 and a3 > 0");
    if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(beta3 > 0.0) ||
        !(beta1 + beta2 + beta3 < M_PI / 2.0))
        throw HypothesisError(
            "angle products must satisfy beta1+beta2+beta3 < pi/2 so the curve "
            "stays free of self-intersections");
    const double t1 = std::tan(beta1), t2 = std::tan(beta2), t3 = std::tan(beta3);
    const double den = t1 * (a3 * t2 * t3 - a2);
    if (!(den > 0.0))
        throw SolverError("a3 tan(beta2) tan(beta3) - a2 must be positive");
    return (a2 * a2 * t2 + a2 * a3 * t3) / den;
}

double triple_well_resonance_residual(const std::array<double, 3>& a,
                                      const std::array<double, 3>& b) {
    const double s1 = std::sin(a[0] * b[0]), c1 = std::cos(a[0] * b[0]);
    const double s2 = std::sin(a[1] * b[1]), c2 = std::cos(a[1] * b[1]);
    const double s3 = std::sin(a[2] * b[2]), c3 = std::cos(a[2] * b[2]);
    return a[0] * a[2] * s1 * s2 * s3 - a[1] * a[2] * c1 * c2 * s3 -
           a[1] * a[1] * c1 * s2 * c3 - a[0] * a[1] * s1 * c2 * c3;
}

double triple_well_tan_residual(const std::array<double, 3>& a,
                                const std::array<double, 3>& b) {
    const double t1 = std::tan(a[0] * b[0]);
    const double t2 = std::tan(a[1] * b[1]);
    const double t3 = std::tan(a[2] * b[2]);
    return a[0] * a[2] * t1 * t2 * t3 - a[1] * a[2] * t3 - a[1] * a[1] * t2 -
           a[0] * a[1] * t1;
}

} // namespace qwlim
