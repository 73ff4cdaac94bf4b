#include "loctime/determinacy.hpp"

#include <cmath>

#include "loctime/error.hpp"
#include "loctime/noise.hpp"
#include "loctime/scheme.hpp"

namespace loctime {

double S_p(double p, double alpha) {
    if (!(p >= 0.0)) throw DomainError("S_p needs p >= 0");
    if (!(alpha >= 0.0)) throw DomainError("S_p needs alpha >= 0");
    if (alpha >= 1.0) throw DomainError("S_p needs alpha < 1; use S_p_limit for alpha -> 1");
    const double log_rest = std::log1p(-alpha);  // log(1 - alpha)
    if (p == 1.0) return -log_rest;
    return -std::expm1((1.0 - p) * log_rest) / (1.0 - p);
}

std::optional<double> S_p_limit(double p) {
    if (!(p >= 0.0)) throw DomainError("S_p_limit needs p >= 0");
    if (p >= 1.0) return std::nullopt;
    return 1.0 / (1.0 - p);
}

LocalTimeAtLevel S_p_inverse(double p, double level) {
    if (!(p >= 0.0)) throw DomainError("S_p_inverse needs p >= 0");
    if (!(level >= 0.0)) throw DomainError("S_p_inverse needs level >= 0");
    double residual;
    if (p < 1.0) {
        const double base = 1.0 - (1.0 - p) * level;
        if (base <= 0.0) return {1.0, 0.0, true};
        residual = std::pow(base, 1.0 / (1.0 - p));
    } else if (p == 1.0) {
        residual = std::exp(-level);
    } else {
        residual = std::pow(1.0 + (p - 1.0) * level, -1.0 / (p - 1.0));
    }
    return {1.0 - residual, residual, false};
}

double laplace_reference(double p, double lambda) {
    if (!(p >= 0.0) || p >= 1.0) throw DomainError("laplace_reference needs 0 <= p < 1 (tau_p is infinite otherwise)");
    if (!(lambda > 0.0)) throw DomainError("laplace_reference needs lambda > 0");
    return std::exp(-std::sqrt(2.0 * lambda) / (1.0 - p));
}

double levy_cdf(double a, double t) {
    if (!(a > 0.0)) throw DomainError("levy_cdf needs a > 0");
    if (!(t > 0.0)) throw DomainError("levy_cdf needs t > 0");
    if (std::isinf(t)) return 1.0;
    return std::erfc(a / std::sqrt(2.0 * t));
}

std::vector<double> default_ladder(int k_max) {
    std::vector<double> out;
    for (int k = 2; k <= k_max; ++k) out.push_back(1.0 / k);
    return out;
}

void DeterminacyConfig::validate() const {
    if (!(p >= 0.0)) throw ConfigError("determinacy needs p >= 0");
    if (delta_ladder.empty()) throw ConfigError("delta ladder is empty");
    for (std::size_t k = 0; k < delta_ladder.size(); ++k) {
        const double d = delta_ladder[k];
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("ladder deltas must lie in (0, 1)");
        if (k > 0 && !(d < delta_ladder[k - 1])) throw ConfigError("ladder deltas must be strictly decreasing");
    }
    if (scheme_n < 1) throw ConfigError("scheme level n must be >= 1");
    sampler.validate();
}

std::string to_string(TauMethod m) { return m == TauMethod::direct ? "direct" : "scheme"; }

namespace {

void fill_censored(TauSample& s, double p, double drop) {
    const auto lt = S_p_inverse(p, drop);
    s.L_at_T = lt.L;
    s.residual_at_T = lt.residual;
    s.exhausted = lt.exhausted;
}

void fill_hit(TauSample& s, double tau) {
    s.tau = tau;
    s.L_at_T = 1.0;
    s.residual_at_T = 0.0;
    s.exhausted = true;
}

}  // namespace

TauSample sample_tau_direct(double p, const BrownianSampler& sampler, std::uint64_t path_index) {
    const auto level = S_p_limit(p);
    if (!level) throw DomainError("direct sampling needs p < 1");
    const double levels[] = {*level};
    const auto fp = first_passage(sampler, path_index, levels);
    TauSample s;
    s.path_index = path_index;
    s.method = TauMethod::direct;
    if (fp.times[0])
        fill_hit(s, *fp.times[0]);
    else
        fill_censored(s, p, fp.running_max_drop);
    return s;
}

LadderRun run_ladder(const DeterminacyConfig& cfg, std::shared_ptr<const PiecewiseLinearPath> driver,
                     std::uint64_t path_index) {
    cfg.validate();
    if (!driver) throw UsageError("run_ladder needs a driver");
    LadderRun run;
    const auto power = NoiseCoefficient::power_law(cfg.p);
    HittingSweep sweep(*driver);
    for (double delta : cfg.delta_ladder) {
        const double level = S_p(cfg.p, 1.0 - delta);
        const auto t = sweep.next(level);
        if (!t) break;
        auto prefix = std::make_shared<const PiecewiseLinearPath>(restrict_to(*driver, *t));
        const auto sol =
            construct_by_hitting(prefix, NoiseCoefficient::truncated_power_law(cfg.p, delta), cfg.scheme_n, 0.0);
        const double L_end = sol.L.values().back();
        run.rungs.push_back({delta, level, *t, L_end, power(L_end)});
    }

    TauSample& s = run.sample;
    s.path_index = path_index;
    s.method = TauMethod::scheme;
    std::optional<double> tau;
    if (const auto limit = S_p_limit(cfg.p)) tau = hitting_time(*driver, *limit);
    if (tau) {
        fill_hit(s, *tau);
    } else {
        double lowest = 0.0;
        for (double v : driver->values()) lowest = std::min(lowest, v);
        fill_censored(s, cfg.p, -lowest);
    }
    return run;
}

TauSample sample_tau_scheme(const DeterminacyConfig& cfg, std::uint64_t path_index) {
    cfg.validate();
    auto driver = std::make_shared<const PiecewiseLinearPath>(sample_brownian(cfg.sampler, path_index));
    return run_ladder(cfg, std::move(driver), path_index).sample;
}

}  // namespace loctime
