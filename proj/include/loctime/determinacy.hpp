#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loctime/brownian.hpp"
#include "loctime/path.hpp"

namespace loctime {

/// S_p(alpha) = int_0^alpha ds / (1 - s)^p for alpha in [0, 1).
double S_p(double p, double alpha);

/// S_p(1-): 1/(1 - p) for p < 1; NONE (infinite) for p >= 1.
std::optional<double> S_p_limit(double p);

/// Local time reached when the driver's running minimum has dropped to
/// `level`, i.e. S_p^{-1}(level), with the residual 1 - L kept separately so
/// that it stays positive when L rounds to 1.
struct LocalTimeAtLevel {
    double L;
    double residual;
    bool exhausted;  // level >= S_p(1-): the noise is gone
};
LocalTimeAtLevel S_p_inverse(double p, double level);

/// E exp(-lambda tau_p) = exp(-sqrt(2 lambda) / (1 - p)).
double laplace_reference(double p, double lambda);

/// P(tau_B(a) <= t) = erfc(a / sqrt(2t)) for the first passage of a standard
/// Brownian motion below -a.
double levy_cdf(double a, double t);

/// delta_k = 1/k for k = 2 .. k_max.
std::vector<double> default_ladder(int k_max);

struct DeterminacyConfig {
    double p = 0.0;
    std::vector<double> delta_ladder = default_ladder(8);
    int scheme_n = 256;
    BrownianSampler sampler;

    void validate() const;
};

enum class TauMethod { direct, scheme };
std::string to_string(TauMethod m);

struct TauSample {
    std::uint64_t path_index = 0;
    std::optional<double> tau;  // empty: not reached by the horizon
    TauMethod method = TauMethod::direct;
    double L_at_T = 0.0;
    double residual_at_T = 1.0;  // 1 - L(T)
    bool exhausted = false;      // local time reached 1 (L is marked, not stored as inf)

    bool censored() const noexcept { return !tau.has_value(); }
};

/// tau_p = tau_B(S_p(1-)) read off a streamed Brownian path.
TauSample sample_tau_direct(double p, const BrownianSampler& sampler, std::uint64_t path_index);

struct LadderRung {
    double delta = 0.0;
    double level = 0.0;          // S_p(1 - delta)
    double time = 0.0;           // tau_B(level)
    double L_scheme = 0.0;       // L^{(n)} at `time` under sigma_{p, delta}
    double noise = 0.0;          // sigma_p(L_scheme)
};

struct LadderRun {
    TauSample sample;
    std::vector<LadderRung> rungs;  // rungs reached before the horizon
};

/// Runs the scheme with sigma_{p, delta_k} down the ladder on one driver.
/// Each rung is solved up to tau_B(S_p(1 - delta_k)), where the truncation
/// has not yet been active. tau is the limit of the rung times, i.e. the
/// crossing of S_p(1-) on the same driver; p >= 1 is always censored.
LadderRun run_ladder(const DeterminacyConfig& cfg, std::shared_ptr<const PiecewiseLinearPath> driver,
                     std::uint64_t path_index);

TauSample sample_tau_scheme(const DeterminacyConfig& cfg, std::uint64_t path_index);

}  // namespace loctime
