#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "loctime/path.hpp"

namespace loctime {

/// Parameters of a reproducible family of Brownian paths on [0, horizon].
///
/// The coarse grid has step `dt` (the last step may be shorter). Every coarse
/// step is split dyadically `refine_depth` times by Brownian-bridge midpoints,
/// so the knots of a sampled path sit on a grid of spacing dt / 2^depth.
struct BrownianSampler {
    std::uint64_t master_seed = 0;
    double dt = 1e-3;
    double horizon = 1.0;
    int refine_depth = 0;

    void validate() const;
    std::size_t coarse_steps() const;
    double fine_dt() const;
};

/// Generates one path a coarse step at a time. Each step draws its Gaussian
/// increment and then its bridge midpoints breadth first, so a path streamed
/// to the end is knot-for-knot the path returned by sample_brownian.
class BrownianStream {
public:
    BrownianStream(const BrownianSampler& sampler, std::uint64_t path_index);

    /// Fills the 2^depth + 1 knot times and values of the next coarse step
    /// (the first entry repeats the previous step's last knot). Returns false
    /// once the horizon is reached.
    bool next(std::span<double> times, std::span<double> values);

    std::size_t knots_per_step() const noexcept { return per_step_ + 1; }

private:
    BrownianSampler sampler_;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    std::size_t step_ = 0;
    std::size_t steps_;
    std::size_t per_step_;
    double value_ = 0.0;
};

PiecewiseLinearPath sample_brownian(const BrownianSampler& sampler, std::uint64_t path_index);

/// Subdivides every segment of a sampled path `levels` more times with
/// Brownian-bridge midpoints. Knot values already present are kept.
PiecewiseLinearPath refine_bridge(const PiecewiseLinearPath& path, const BrownianSampler& sampler, int levels);

/// Streaming first passages below -level for several sorted levels at once,
/// plus the running-minimum magnitude M^B at the point the stream stopped.
struct FirstPassage {
    std::vector<std::optional<double>> times;
    double running_max_drop = 0.0;  // M^B(T) when any level is censored
};

/// Same crossings as hitting_time(sample_brownian(sampler, index), level) for
/// each level, without materialising the path; stops as soon as the deepest
/// level is hit.
FirstPassage first_passage(const BrownianSampler& sampler, std::uint64_t path_index,
                           std::span<const double> sorted_levels);

}  // namespace loctime
