#include "loctime/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loctime/error.hpp"

namespace loctime {

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    validate();
}

PiecewiseLinearPath::PiecewiseLinearPath(std::span<const Knot> knots) {
    times_.reserve(knots.size());
    values_.reserve(knots.size());
    for (const auto& k : knots) {
        times_.push_back(k.t);
        values_.push_back(k.value);
    }
    validate();
}

PiecewiseLinearPath PiecewiseLinearPath::trusted(std::vector<double> times, std::vector<double> values) {
    PiecewiseLinearPath p;
    p.times_ = std::move(times);
    p.values_ = std::move(values);
    return p;
}

void PiecewiseLinearPath::validate() const {
    if (times_.empty()) throw ConfigError("path needs at least one knot");
    if (times_.size() != values_.size()) throw ConfigError("path times and values differ in length");
    if (times_.front() != 0.0) throw ConfigError("path must start at t = 0");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
            throw ConfigError("path knot " + std::to_string(i) + " is not finite");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw ConfigError("path knot times must be strictly increasing (knot " + std::to_string(i) + ")");
    }
}

std::size_t PiecewiseLinearPath::segment_of(double t) const {
    if (times_.size() < 2) return 0;
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    return std::min(k, times_.size() - 2);
}

double PiecewiseLinearPath::operator()(double t) const {
    if (!(t >= 0.0 && t <= horizon()))
        throw DomainError("eval at t = " + std::to_string(t) + " outside [0, " + std::to_string(horizon()) + "]");
    if (times_.size() == 1) return values_[0];
    const std::size_t k = segment_of(t);
    return interpolate(times_[k], times_[k + 1], values_[k], values_[k + 1], t);
}

double eval(const PiecewiseLinearPath& path, double t) { return path(t); }

PiecewiseLinearPath running_min(const PiecewiseLinearPath& g) {
    const auto ts = g.times();
    const auto vs = g.values();
    std::vector<double> times;
    std::vector<double> values;
    times.reserve(ts.size() + ts.size() / 4);
    values.reserve(ts.size() + ts.size() / 4);

    double level = std::max(-vs[0], 0.0);
    times.push_back(0.0);
    values.push_back(level);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double up0 = -vs[k];
        const double up1 = -vs[k + 1];
        if (up1 > level) {
            if (up0 < level) {
                const double tc = segment_crossing(ts[k], ts[k + 1], vs[k], vs[k + 1], -level);
                if (tc > ts[k] && tc < ts[k + 1]) {
                    times.push_back(tc);
                    values.push_back(level);
                }
            }
            level = up1;
        }
        times.push_back(ts[k + 1]);
        values.push_back(level);
    }
    return PiecewiseLinearPath::trusted(std::move(times), std::move(values));
}

std::optional<double> HittingSweep::next(double a) {
    if (a < 0.0) throw DomainError("hitting level must be >= 0");
    if (a < last_level_) throw UsageError("HittingSweep levels must be nondecreasing");
    last_level_ = a;
    const auto ts = g_->times();
    const auto vs = g_->values();
    const double target = -a;
    if (segment_ == 0 && vs[0] < target) return 0.0;
    for (; segment_ + 1 < ts.size(); ++segment_) {
        const double g0 = vs[segment_];
        const double g1 = vs[segment_ + 1];
        if (g1 < target && g0 >= target) return segment_crossing(ts[segment_], ts[segment_ + 1], g0, g1, target);
    }
    return std::nullopt;
}

std::optional<double> hitting_time(const PiecewiseLinearPath& g, double a) {
    if (a < 0.0) throw DomainError("hitting level must be >= 0");
    HittingSweep sweep(g);
    return sweep.next(a);
}

namespace {

// Visits the sorted union of two knot sets.
template <class F>
void for_each_union_time(std::span<const double> a, std::span<const double> b, F&& f) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double t;
        if (j >= b.size() || (i < a.size() && a[i] < b[j])) {
            t = a[i++];
        } else if (i >= a.size() || b[j] < a[i]) {
            t = b[j++];
        } else {
            t = a[i];
            ++i;
            ++j;
        }
        f(t);
    }
}

// Sequential evaluator for monotone query times.
class Cursor {
public:
    explicit Cursor(const PiecewiseLinearPath& p) : p_(&p) {}
    double operator()(double t) {
        const auto ts = p_->times();
        const auto vs = p_->values();
        if (ts.size() == 1) return vs[0];
        while (k_ + 2 < ts.size() && ts[k_ + 1] <= t) ++k_;
        return interpolate(ts[k_], ts[k_ + 1], vs[k_], vs[k_ + 1], t);
    }

private:
    const PiecewiseLinearPath* p_;
    std::size_t k_ = 0;
};

}  // namespace

double sup_distance(const PiecewiseLinearPath& p, const PiecewiseLinearPath& q) {
    if (p.horizon() != q.horizon()) throw UsageError("sup_distance needs paths on the same horizon");
    Cursor cp(p), cq(q);
    double best = 0.0;
    for_each_union_time(p.times(), q.times(), [&](double t) { best = std::max(best, std::abs(cp(t) - cq(t))); });
    return best;
}

PiecewiseLinearPath add(const PiecewiseLinearPath& p, const PiecewiseLinearPath& q) {
    if (p.horizon() != q.horizon()) throw UsageError("add needs paths on the same horizon");
    Cursor cp(p), cq(q);
    std::vector<double> times, values;
    times.reserve(std::max(p.size(), q.size()));
    values.reserve(std::max(p.size(), q.size()));
    for_each_union_time(p.times(), q.times(), [&](double t) {
        times.push_back(t);
        values.push_back(cp(t) + cq(t));
    });
    return PiecewiseLinearPath::trusted(std::move(times), std::move(values));
}

PiecewiseLinearPath restrict_to(const PiecewiseLinearPath& path, double t_end) {
    if (!(t_end >= 0.0 && t_end <= path.horizon())) throw DomainError("restrict_to beyond the path horizon");
    const auto ts = path.times();
    const auto vs = path.values();
    auto it = std::lower_bound(ts.begin(), ts.end(), t_end);
    const auto keep = static_cast<std::size_t>(it - ts.begin());
    std::vector<double> times(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(keep));
    std::vector<double> values(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(keep));
    times.push_back(t_end);
    values.push_back(path(t_end));
    return PiecewiseLinearPath::trusted(std::move(times), std::move(values));
}

std::vector<double> uniform_grid(double horizon, double dt) {
    if (!(dt > 0.0)) throw DomainError("grid step must be positive");
    const double steps = horizon / dt;
    auto n = static_cast<std::size_t>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
        n = static_cast<std::size_t>(std::ceil(steps));
    std::vector<double> grid(n + 1);
    for (std::size_t k = 0; k < n; ++k) grid[k] = static_cast<double>(k) * dt;
    grid[n] = horizon;
    return grid;
}

std::vector<double> sample_on(const PiecewiseLinearPath& path, std::span<const double> sorted_times) {
    Cursor c(path);
    std::vector<double> out;
    out.reserve(sorted_times.size());
    for (double t : sorted_times) {
        if (!(t >= 0.0 && t <= path.horizon())) throw DomainError("sample time outside the path horizon");
        out.push_back(c(t));
    }
    return out;
}

}  // namespace loctime
