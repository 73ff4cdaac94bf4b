#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace loctime {

struct Knot {
    double t;
    double value;
};

/// A continuous function on [0, T] given by ordered knots and linear
/// interpolation between them. The knots are the whole representation.
///
/// Knot times are strictly increasing, start at 0 and end at the horizon T;
/// values are finite. A single knot describes a path on [0, 0].
class PiecewiseLinearPath {
public:
    PiecewiseLinearPath(std::vector<double> times, std::vector<double> values);
    explicit PiecewiseLinearPath(std::span<const Knot> knots);

    /// Builds without validation; for producers whose output is valid by
    /// construction.
    static PiecewiseLinearPath trusted(std::vector<double> times, std::vector<double> values);

    double horizon() const noexcept { return times_.back(); }
    std::size_t size() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    double time(std::size_t i) const { return times_[i]; }
    double value(std::size_t i) const { return values_[i]; }

    /// Index of the segment [t_k, t_{k+1}] holding t (last segment for t = T).
    std::size_t segment_of(double t) const;

    double operator()(double t) const;

    friend bool operator==(const PiecewiseLinearPath&, const PiecewiseLinearPath&) = default;

private:
    PiecewiseLinearPath() = default;
    void validate() const;

    std::vector<double> times_;
    std::vector<double> values_;
};

double eval(const PiecewiseLinearPath& path, double t);

/// Linear interpolation on one segment; exact at both endpoints.
inline double interpolate(double t0, double t1, double v0, double v1, double t) {
    if (t <= t0) return v0;
    if (t >= t1) return v1;
    return v0 + (v1 - v0) * ((t - t0) / (t1 - t0));
}

/// First time in [t0, t1] at which the segment from g0 to g1 reaches `level`,
/// given g0 >= level > g1. Clamped to the segment.
inline double segment_crossing(double t0, double t1, double g0, double g1, double level) {
    const double t = t0 + (t1 - t0) * ((g0 - level) / (g0 - g1));
    return t < t0 ? t0 : (t > t1 ? t1 : t);
}

/// M^g(t) = (-min_{s<=t} g(s)) v 0, with knots at the input knots plus every
/// point where -g re-crosses its previous running maximum inside a segment.
PiecewiseLinearPath running_min(const PiecewiseLinearPath& g);

/// tau_g(a) = inf{t : M^g(t) > a}. NONE when M^g(T) <= a; a touch of -a
/// without going below it does not count.
std::optional<double> hitting_time(const PiecewiseLinearPath& g, double a);

/// Sweeps the hitting times of a nondecreasing sequence of levels in one
/// pass over the path.
class HittingSweep {
public:
    explicit HittingSweep(const PiecewiseLinearPath& g) : g_(&g) {}

    /// Requires a >= every level passed before.
    std::optional<double> next(double a);

private:
    const PiecewiseLinearPath* g_;
    std::size_t segment_ = 0;
    double last_level_ = 0.0;
};

/// max |p(t) - q(t)| over the union of both knot sets, which is the sup norm
/// of the difference on the common horizon.
double sup_distance(const PiecewiseLinearPath& p, const PiecewiseLinearPath& q);

/// The path restricted to [0, t_end] (a knot is added at t_end if needed).
PiecewiseLinearPath restrict_to(const PiecewiseLinearPath& path, double t_end);

/// Values of the path on the grid 0, dt, 2dt, ..., T (last point is T).
std::vector<double> uniform_grid(double horizon, double dt);
std::vector<double> sample_on(const PiecewiseLinearPath& path, std::span<const double> sorted_times);

/// Pointwise sum of two paths over the union of their knots.
PiecewiseLinearPath add(const PiecewiseLinearPath& p, const PiecewiseLinearPath& q);

}  // namespace loctime
