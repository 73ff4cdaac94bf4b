#include "loctime/brownian.hpp"

#include <cmath>
#include <cstring>

#include "loctime/error.hpp"
#include "loctime/seeding.hpp"

namespace loctime {

void BrownianSampler::validate() const {
    if (!(dt > 0.0)) throw ConfigError("sampler dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("sampler horizon must be positive");
    if (dt >= horizon) throw ConfigError("sampler dt must be smaller than the horizon");
    if (refine_depth < 0 || refine_depth > 20) throw ConfigError("refine_depth must lie in [0, 20]");
}

std::size_t BrownianSampler::coarse_steps() const {
    return uniform_grid(horizon, dt).size() - 1;
}

double BrownianSampler::fine_dt() const { return std::ldexp(dt, -refine_depth); }

namespace {

double coarse_time(const BrownianSampler& s, std::size_t k, std::size_t steps) {
    return k == steps ? s.horizon : static_cast<double>(k) * s.dt;
}

// Breadth-first Brownian-bridge fill of values[1 .. P-1] between the fixed
// endpoints values[0] and values[P]; P is a power of two.
template <class Normal, class Engine>
void bridge_fill(std::span<const double> times, std::span<double> values, std::size_t P, Normal& normal,
                 Engine& engine) {
    for (std::size_t stride = P; stride >= 2; stride /= 2) {
        const std::size_t half = stride / 2;
        for (std::size_t m = half; m < P; m += stride) {
            const double span = times[m + half] - times[m - half];
            values[m] = 0.5 * (values[m - half] + values[m + half]) + 0.5 * std::sqrt(span) * normal(engine);
        }
    }
}

void fill_times(double c0, double c1, std::size_t P, std::span<double> times) {
    const double h = c1 - c0;
    times[0] = c0;
    for (std::size_t j = 1; j < P; ++j) times[j] = c0 + h * (static_cast<double>(j) / static_cast<double>(P));
    times[P] = c1;
}

std::uint64_t fingerprint(const PiecewiseLinearPath& path) {
    std::uint64_t h = splitmix64(path.size());
    for (double v : path.values()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h = splitmix64(h ^ bits);
    }
    return h;
}

}  // namespace

BrownianStream::BrownianStream(const BrownianSampler& sampler, std::uint64_t path_index)
    : sampler_(sampler), engine_(per_path_seed(sampler.master_seed, path_index)) {
    sampler_.validate();
    steps_ = sampler_.coarse_steps();
    per_step_ = std::size_t{1} << sampler_.refine_depth;
}

bool BrownianStream::next(std::span<double> times, std::span<double> values) {
    if (step_ >= steps_) return false;
    const double c0 = coarse_time(sampler_, step_, steps_);
    const double c1 = coarse_time(sampler_, step_ + 1, steps_);
    fill_times(c0, c1, per_step_, times);
    values[0] = value_;
    values[per_step_] = value_ + std::sqrt(c1 - c0) * normal_(engine_);
    bridge_fill(times, values, per_step_, normal_, engine_);
    value_ = values[per_step_];
    ++step_;
    return true;
}

PiecewiseLinearPath sample_brownian(const BrownianSampler& sampler, std::uint64_t path_index) {
    BrownianStream stream(sampler, path_index);
    const std::size_t per = stream.knots_per_step();
    std::vector<double> step_t(per), step_v(per);
    const std::size_t total = sampler.coarse_steps() * (per - 1) + 1;
    std::vector<double> times, values;
    times.reserve(total);
    values.reserve(total);
    times.push_back(0.0);
    values.push_back(0.0);
    while (stream.next(step_t, step_v)) {
        times.insert(times.end(), step_t.begin() + 1, step_t.end());
        values.insert(values.end(), step_v.begin() + 1, step_v.end());
    }
    return PiecewiseLinearPath::trusted(std::move(times), std::move(values));
}

PiecewiseLinearPath refine_bridge(const PiecewiseLinearPath& path, const BrownianSampler& sampler, int levels) {
    sampler.validate();
    if (levels < 0) throw ConfigError("refine levels must be >= 0");
    if (path.horizon() != sampler.horizon || path.value(0) != 0.0)
        throw ConfigError("path was not produced by this sampler");
    if (levels == 0) return path;
    const std::size_t P = std::size_t{1} << levels;
    std::mt19937_64 engine(splitmix64(sampler.master_seed ^ fingerprint(path)) + static_cast<std::uint64_t>(levels));
    boost::random::normal_distribution<double> normal;

    const auto ts = path.times();
    const auto vs = path.values();
    std::vector<double> times, values;
    times.reserve((ts.size() - 1) * P + 1);
    values.reserve((ts.size() - 1) * P + 1);
    times.push_back(ts[0]);
    values.push_back(vs[0]);
    std::vector<double> st(P + 1), sv(P + 1);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        fill_times(ts[k], ts[k + 1], P, st);
        sv[0] = vs[k];
        sv[P] = vs[k + 1];
        bridge_fill(st, sv, P, normal, engine);
        times.insert(times.end(), st.begin() + 1, st.end());
        values.insert(values.end(), sv.begin() + 1, sv.end());
    }
    return PiecewiseLinearPath::trusted(std::move(times), std::move(values));
}

FirstPassage first_passage(const BrownianSampler& sampler, std::uint64_t path_index,
                           std::span<const double> sorted_levels) {
    FirstPassage out;
    out.times.assign(sorted_levels.size(), std::nullopt);
    for (std::size_t i = 0; i < sorted_levels.size(); ++i) {
        if (sorted_levels[i] < 0.0) throw DomainError("first-passage level must be >= 0");
        if (i > 0 && sorted_levels[i] < sorted_levels[i - 1]) throw UsageError("first-passage levels must be sorted");
    }
    BrownianStream stream(sampler, path_index);
    const std::size_t per = stream.knots_per_step();
    std::vector<double> st(per), sv(per);
    std::size_t pending = 0;
    double lowest = 0.0;
    while (pending < sorted_levels.size() && stream.next(st, sv)) {
        for (std::size_t j = 0; j + 1 < per && pending < sorted_levels.size(); ++j) {
            const double g1 = sv[j + 1];
            while (pending < sorted_levels.size() && g1 < -sorted_levels[pending]) {
                out.times[pending] = segment_crossing(st[j], st[j + 1], sv[j], g1, -sorted_levels[pending]);
                ++pending;
            }
            if (g1 < lowest) lowest = g1;
        }
    }
    out.running_max_drop = -lowest;
    return out;
}

}  // namespace loctime
