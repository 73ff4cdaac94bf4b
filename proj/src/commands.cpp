#include "loctime/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "loctime/checks.hpp"
#include "loctime/determinacy.hpp"
#include "loctime/error.hpp"
#include "loctime/io.hpp"
#include "loctime/reflected.hpp"
#include "loctime/scheme.hpp"

namespace loctime {

std::shared_ptr<const PiecewiseLinearPath> make_driver(const RunConfig& cfg) {
    if (cfg.driver.kind == DriverSpec::Kind::linear)
        return std::make_shared<const PiecewiseLinearPath>(std::vector<double>{0.0, cfg.T},
                                                           std::vector<double>{0.0, cfg.driver.slope * cfg.T});
    return std::make_shared<const PiecewiseLinearPath>(sample_brownian(cfg.sampler(), cfg.path_index));
}

DeterminacyResult run_determinacy(const RunConfig& cfg) {
    DeterminacyResult out;
    DeterminacyConfig dc;
    dc.p = cfg.p;
    dc.delta_ladder = default_ladder(cfg.ladder_kmax);
    dc.scheme_n = cfg.scheme_n;
    dc.sampler = cfg.sampler();
    dc.validate();
    const bool direct = cfg.p < 1.0;
    const std::size_t scheme_paths = direct ? std::min(cfg.scheme_paths, cfg.num_paths) : cfg.num_paths;

    struct PathResult {
        std::optional<TauSample> direct;
        std::optional<TauSample> scheme;
    };
    EnsembleConfig ec{"determinacy", cfg.seed, cfg.num_paths, cfg.workers};
    auto task = [&](std::uint64_t i) {
        PathResult r;
        if (direct) r.direct = sample_tau_direct(cfg.p, dc.sampler, i);
        if (i < scheme_paths) r.scheme = sample_tau_scheme(dc, i);
        return r;
    };
    auto reduce = [&](EnsembleReport& report, std::vector<PathResult>& results) {
        std::vector<TauSample> main;
        std::vector<double> finite, L_end;
        double worst_gap = 0.0;
        std::size_t compared = 0, disagreements = 0;
        for (auto& r : results) {
            if (r.direct && r.scheme) {
                ++compared;
                if (r.direct->censored() != r.scheme->censored())
                    ++disagreements;
                else if (!r.direct->censored())
                    worst_gap = std::max(worst_gap, std::abs(*r.direct->tau - *r.scheme->tau));
            }
            const TauSample& s = r.direct ? *r.direct : *r.scheme;
            main.push_back(s);
            L_end.push_back(s.L_at_T);
            if (!s.censored()) finite.push_back(*s.tau);
        }
        for (auto& r : results) {
            out.samples.push_back(r.direct ? *r.direct : *r.scheme);
            if (r.direct && r.scheme) out.samples.push_back(*r.scheme);
        }
        if (main.empty()) return;
        std::vector<double> censored;
        for (const auto& s : main) censored.push_back(s.censored() ? 1.0 : 0.0);
        report.statistics.push_back(summarize("censored_fraction", censored));
        report.statistics.push_back(summarize("L_at_T", L_end));
        if (!finite.empty()) report.statistics.push_back(summarize("tau_uncensored", finite));
        if (compared > 0) {
            Statistic gap;
            gap.name = "scheme_vs_direct_max_gap";
            gap.n = compared;
            gap.mean = disagreements > 0 ? INFINITY : worst_gap;
            report.statistics.push_back(gap);
        }
        for (double lambda : cfg.lambda) {
            auto est = estimate_laplace(main, lambda, cfg.T);
            if (cfg.p < 1.0 && cfg.compare_laplace) est.reference = laplace_reference(cfg.p, lambda);
            report.laplace.push_back(est);
        }
        if (!finite.empty() && cfg.p < 1.0) {
            const double level = *S_p_limit(cfg.p);
            report.ecdf = ecdf(finite, main.size());
            report.ks_distance = ks_distance(*report.ecdf, [level](double t) { return t > 0.0 ? levy_cdf(level, t) : 0.0; });
            report.ks_reference = "erfc(" + format_double(level) + "/sqrt(2t))";
        }
    };
    out.report = run_ensemble(ec, task, reduce);
    out.report.config_echo = cfg.echo;
    return out;
}

namespace {

CommandResult run_path(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
    CommandResult res;
    auto driver = make_driver(cfg);
    const auto sigma = make_noise(cfg.sigma_descriptor);
    const auto sol = construct_by_hitting(driver, sigma, cfg.n0, cfg.x0);
    const auto rp = reflect(sol);
    write_knots_csv(*driver, dir / "driver.csv");
    write_path_csv(rp, dir / "path.csv");
    write_reflected_grid_csv(rp, cfg.grid_dt, cfg.epsilon, dir / "reflected.csv");
    res.files = {dir / "driver.csv", dir / "path.csv", dir / "reflected.csv"};
    log << "path: n = " << cfg.n0 << ", events = " << sol.event_times.size()
        << ", L(T) = " << format_double(sol.L.values().back()) << "\n";
    return res;
}

CommandResult run_converge(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
    CommandResult res;
    auto driver = make_driver(cfg);
    const auto sigma = make_noise(cfg.sigma_descriptor);
    const auto report = refine_until(driver, sigma, cfg.x0, cfg.n0, cfg.tol, cfg.max_doublings);
    write_text(format_report(report), dir / "convergence.txt");
    write_path_csv(report.final, dir / "path.csv");
    res.files = {dir / "convergence.txt", dir / "path.csv"};
    log << "converge: " << (report.converged ? "converged" : "not converged") << " at n = " << report.final.n;
    if (!report.sup_gaps.empty()) log << ", last gap = " << format_double(report.sup_gaps.back());
    log << "\n";
    return res;
}

CommandResult run_determinacy_command(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
    CommandResult res;
    auto result = run_determinacy(cfg);
    write_tau_csv(result.samples, dir / "tau.csv");
    write_report_json(result.report, dir / "report.json");
    res.files = {dir / "tau.csv", dir / "report.json"};
    log << "determinacy: " << result.report.completed << "/" << result.report.num_paths << " paths in "
        << result.report.wall_clock_seconds << " s\n";
    for (const auto& e : result.report.laplace) {
        log << "  lambda = " << e.lambda << ": estimate " << (e.mean ? format_double(*e.mean) : "n/a") << " +- "
            << e.std_error;
        if (e.reference) log << " (reference " << *e.reference << ")";
        log << "\n";
    }
    if (result.report.ks_distance) log << "  KS vs " << result.report.ks_reference << ": " << *result.report.ks_distance << "\n";
    if (result.report.partial()) {
        log << "  " << result.report.failures.size() << " path(s) failed\n";
        res.exit_code = 1;
    }
    return res;
}

}  // namespace

CommandResult run_command(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    if (cfg.command != Command::checks) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    switch (cfg.command) {
        case Command::path: return run_path(cfg, out_dir, log);
        case Command::converge: return run_converge(cfg, out_dir, log);
        case Command::determinacy: return run_determinacy_command(cfg, out_dir, log);
        case Command::checks: {
            const auto results = run_checks(cfg.seed, log);
            const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
            return {ok ? 0 : 1, {}};
        }
    }
    return {2, {}};
}

}  // namespace loctime
