#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "loctime/determinacy.hpp"
#include "loctime/error.hpp"
#include "loctime/seeding.hpp"

namespace loctime {

/// Mean and standard error (sample sd / sqrt(n)); the error is undefined for
/// a single value.
struct Statistic {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> std_error;
};

/// Two-pass summary in the given order, so the result depends only on the
/// values and their order.
Statistic summarize(std::string name, std::span<const double> values);

/// Right-continuous empirical CDF. `x` holds the distinct sorted sample
/// values and `F[i]` = #{samples <= x[i]} / n_total. Mass beyond the samples
/// (censored draws) keeps F below 1.
struct Ecdf {
    std::vector<double> x;
    std::vector<double> F;
    std::size_t n_total = 0;

    double operator()(double t) const;
};

Ecdf ecdf(std::span<const double> samples, std::size_t n_total = 0);

/// sup over jump points of max(|F_N(x) - F(x)|, |F_N(x-) - F(x-)|); F(x-) is
/// read just below x, so a continuous reference gives the textbook statistic
/// and a step reference is compared limit to limit.
double ks_distance(const Ecdf& empirical, const std::function<double(double)>& reference_cdf);

/// Estimate of E exp(-lambda tau) from possibly censored samples. Censored
/// draws count as 0 in `mean` (a lower bound); `upper` adds their largest
/// possible contribution exp(-lambda T).
struct LaplaceEstimate {
    double lambda = 0.0;
    std::size_t n_total = 0;
    std::size_t n_censored = 0;
    std::optional<double> mean;  // empty when every sample is censored
    double std_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> reference;
};

LaplaceEstimate estimate_laplace(std::span<const TauSample> taus, double lambda, double horizon);

template <class R>
struct PathOutcome {
    std::optional<R> value;
    std::string error;
};

/// Runs task(index) for every index on `workers` threads. Results land in
/// index order whatever the schedule; an exception fails only its own index.
template <class F>
auto run_paths(std::size_t num_paths, unsigned workers, F&& task)
    -> std::vector<PathOutcome<std::invoke_result_t<F&, std::uint64_t>>> {
    using R = std::invoke_result_t<F&, std::uint64_t>;
    std::vector<PathOutcome<R>> out(num_paths);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < num_paths; i = next.fetch_add(1)) {
            try {
                out[i].value.emplace(task(static_cast<std::uint64_t>(i)));
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(num_paths, 1))));
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    }
    return out;
}

struct EnsembleConfig {
    std::string experiment;
    std::uint64_t master_seed = 0;
    std::size_t num_paths = 1;
    unsigned workers = 1;
};

struct EnsembleReport {
    std::string experiment;
    std::uint64_t master_seed = 0;
    std::size_t num_paths = 0;
    std::size_t completed = 0;
    std::vector<std::pair<std::uint64_t, std::string>> failures;
    std::vector<Statistic> statistics;
    std::vector<LaplaceEstimate> laplace;
    std::optional<double> ks_distance;
    std::string ks_reference;
    std::optional<Ecdf> ecdf;
    nlohmann::ordered_json config_echo;
    double wall_clock_seconds = 0.0;  // logged, never serialised

    bool partial() const noexcept { return !failures.empty(); }
};

/// Executes `task` on every path and hands the successful results, in index
/// order, to `reduce`, which fills the statistic records of the report.
template <class Task, class Reduce>
EnsembleReport run_ensemble(const EnsembleConfig& cfg, Task&& task, Reduce&& reduce) {
    if (cfg.num_paths < 1) throw ConfigError("ensemble needs at least one path");
    const auto start = std::chrono::steady_clock::now();
    auto outcomes = run_paths(cfg.num_paths, cfg.workers, task);
    using R = typename decltype(outcomes)::value_type;
    std::vector<std::remove_cvref_t<decltype(*std::declval<R>().value)>> results;
    results.reserve(outcomes.size());
    EnsembleReport report;
    report.experiment = cfg.experiment;
    report.master_seed = cfg.master_seed;
    report.num_paths = cfg.num_paths;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].value)
            results.push_back(std::move(*outcomes[i].value));
        else
            report.failures.emplace_back(i, outcomes[i].error);
    }
    report.completed = results.size();
    reduce(report, results);
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::ordered_json to_json(const EnsembleReport& report);

}  // namespace loctime
