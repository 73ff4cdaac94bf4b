#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loctime/noise.hpp"
#include "loctime/path.hpp"

namespace loctime {

/// One run of the level-n approximation of the pair (x_f, L) driven by f.
///
/// On the event segment [t_i, t_{i+1}) the solution moves as
/// sigma(i/n) times the driver increments; t_{i+1} is the first time the
/// solution goes below -(i+1)/n. `event_times` holds t_1, t_2, ... that fall
/// in [0, T] (t_0 = 0 is implicit) and `thresholds` holds a_0 .. a_m for the m
/// realised events, with a_i = sum_{j<i} 1/(n sigma(j/n)).
struct SchemeSolution {
    int n = 1;
    std::vector<double> event_times;
    std::vector<double> thresholds;
    PiecewiseLinearPath x;
    PiecewiseLinearPath L;
    NoiseCoefficient sigma_used;
    double x0 = 0.0;
    std::shared_ptr<const PiecewiseLinearPath> driver;
};

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> sup_gaps;
    SchemeSolution final;
    bool converged = false;
    double tol = 0.0;
};

/// Smallest integer C >= 1 with C / (K C + sigma(0)) > 1/K - eps; NONE when
/// K = 0 (a constant coefficient needs no cutoff).
std::optional<long long> lemma2_C(const NoiseCoefficient& sigma, double eps);

/// C' = 2 (sigma(0) + K C(eps)) + K + 2 + 1/delta, the modulus constant of the
/// oscillation bound on [0, tau_f(1/K - eps)].
double oscillation_constant(const NoiseCoefficient& sigma, double eps);

/// a_0 .. a_{i_max}: a_0 = 0, a_{i+1} = a_i + 1/(n sigma(i/n)).
std::vector<double> build_thresholds(const NoiseCoefficient& sigma, int n, std::size_t i_max);

/// Event times as first passages of the running minimum of the driver through
/// the precomputed thresholds; x assembled from the telescoping sum over event
/// segments.
SchemeSolution construct_by_hitting(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                                    int n, double x0);

/// Same object built by walking the driver segment by segment and testing the
/// solution against the next threshold -(i+1)/n directly.
SchemeSolution construct_inductive(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                                   int n, double x0);

/// max of sup |x1 - x2| and sup |L1 - L2| over the union of knots.
double sup_distance(const SchemeSolution& a, const SchemeSolution& b);

/// Doubles n from n0 until two consecutive levels are within tol in sup
/// distance, or max_doublings is exhausted.
ConvergenceReport refine_until(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                               double x0, int n0, double tol, int max_doublings);

/// Human-readable record of a convergence study.
std::string format_report(const ConvergenceReport& report);

/// Result of checking observed oscillations against the uniform bound.
struct OscillationCheck {
    double window_end = 0.0;    // tau_f(1/K - eps), or T
    double constant = 0.0;      // C'
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0;   // max observed |x(t) - x(s)| / bound
};

/// Evaluates the oscillation bound on `pairs` pseudo-random knot pairs
/// (s, t) inside [0, tau_f(1/K - eps)].
OscillationCheck check_oscillation(const SchemeSolution& s, double eps, std::size_t pairs, std::uint64_t seed);

}  // namespace loctime

namespace loctime {

/// Exact identities a level-n solution must satisfy, measured as worst
/// absolute defects.
struct SchemeDiagnostics {
    double event_values = 0.0;     // |x(t_i) + i/n|
    double driver_drops = 0.0;     // |f(t_{i+1}) - f(t_i) + 1/(n sigma(i/n))| (first drop includes x0)
    double segment_scaling = 0.0;  // |x(t) - x(t_i) - sigma(i/n)(f(t) - f(t_i))| at driver knots
    double running_min = 0.0;      // sup |L - M^x|
    double min_reflected = 0.0;    // min over knots of x + L
    double off_boundary_increase = 0.0;  // increase of L where x + L > eps_flat on a whole segment
};

SchemeDiagnostics diagnose(const SchemeSolution& s, double eps_flat = 1e-6);

}  // namespace loctime
