#include "loctime/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "loctime/brownian.hpp"
#include "loctime/determinacy.hpp"
#include "loctime/ensemble.hpp"
#include "loctime/noise.hpp"
#include "loctime/reflected.hpp"
#include "loctime/scheme.hpp"
#include "loctime/seeding.hpp"

namespace loctime {

namespace {

using Body = std::function<std::string(std::uint64_t, bool&)>;

struct Check {
    const char* name;
    Body body;
};

std::string fmt(const char* label, double v) {
    std::ostringstream os;
    os << label << " = " << v;
    return os.str();
}

std::shared_ptr<const PiecewiseLinearPath> brownian(std::uint64_t seed, std::uint64_t index, double T, double dt,
                                                    int depth = 0) {
    return std::make_shared<const PiecewiseLinearPath>(sample_brownian({seed, dt, T, depth}, index));
}

std::vector<NoiseCoefficient> admissible_noises() {
    return {NoiseCoefficient::constant(0.7), NoiseCoefficient::affine(1.0, 1.0), NoiseCoefficient::affine(0.5, 2.0),
            NoiseCoefficient::truncated_power_law(0.5, 0.1), NoiseCoefficient::truncated_power_law(2.0, 0.2),
            NoiseCoefficient::tabulated(PiecewiseLinearPath({0.0, 0.5, 1.0, 50.0}, {1.0, 0.6, 1.4, 1.4}))};
}

std::vector<Check> suite() {
    std::vector<Check> checks;

    checks.push_back({"paths.running_min_idempotent", [](std::uint64_t seed, bool& ok) {
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto M = running_min(*brownian(seed, i, 1.0, 1e-3));
            std::vector<double> neg(M.values().begin(), M.values().end());
            for (double& v : neg) v = -v;
            const auto again = running_min(PiecewiseLinearPath(std::vector<double>(M.times().begin(), M.times().end()), neg));
            worst = std::max(worst, sup_distance(again, M));
        }
        ok = worst == 0.0;
        return fmt("max deviation", worst);
    }});

    checks.push_back({"paths.hitting_consistent_with_running_min", [](std::uint64_t seed, bool& ok) {
        double worst = 0.0;
        bool order = true;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto g = brownian(seed, 100 + i, 2.0, 1e-3);
            const auto M = running_min(*g);
            double prev = 0.0;
            for (double a : {0.05, 0.2, 0.4, 0.8}) {
                const auto t = hitting_time(*g, a);
                if (!t) continue;
                worst = std::max(worst, std::abs(M(*t) - a));
                for (std::size_t k = 0; k < M.size() && M.time(k) < *t; ++k) order &= M.value(k) <= a + 1e-12;
                order &= *t >= prev;
                prev = *t;
                const auto right = hitting_time(*g, a + 1e-12);
                order &= right && *right >= *t && *right - *t < 1e-6;
            }
        }
        ok = worst <= 1e-12 && order;
        return fmt("max |M(tau(a)) - a|", worst);
    }});

    checks.push_back({"paths.brownian_streaming_matches_materialised", [](std::uint64_t seed, bool& ok) {
        const BrownianSampler s{seed, 1e-2, 5.0, 2};
        ok = true;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto path = sample_brownian(s, i);
            const double levels[] = {0.5, 1.0, 1.5};
            const auto fp = first_passage(s, i, levels);
            for (std::size_t k = 0; k < 3; ++k) ok &= fp.times[k] == hitting_time(path, levels[k]);
            ok &= path == sample_brownian(s, i) && path.value(0) == 0.0;
            const auto fine = refine_bridge(path, s, 1);
            ok &= fine.size() == 2 * (path.size() - 1) + 1;
            for (std::size_t k = 0; k < path.size(); ++k) ok &= fine.value(2 * k) == path.value(k);
        }
        return std::string(ok ? "identical" : "mismatch");
    }});

    checks.push_back({"noise.lipschitz_and_lower_bound", [](std::uint64_t seed, bool& ok) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 3.0);
        auto noises = admissible_noises();
        noises.push_back(NoiseCoefficient::power_law(1.5));
        std::size_t bad = 0;
        for (const auto& s : noises) {
            const double top = s.domain_max().value_or(3.0);
            for (int k = 0; k < 10000; ++k) {
                const double a = u(rng) * top / 3.0, b = u(rng) * top / 3.0;
                if (std::abs(s(a) - s(b)) > s.lipschitz() * std::abs(a - b) + 1e-12) ++bad;
                if (s(a) < s.lower_bound() - 1e-12) ++bad;
            }
        }
        const auto tp = NoiseCoefficient::truncated_power_law(0.5, 0.1);
        const auto pl = NoiseCoefficient::power_law(0.5);
        for (int k = 0; k <= 900; ++k) bad += tp(k * 1e-3) != pl(k * 1e-3);
        ok = bad == 0;
        return fmt("violations", static_cast<double>(bad));
    }});

    checks.push_back({"scheme.dual_construction_equality", [](std::uint64_t seed, bool& ok) {
        double dt_worst = 0.0, x_worst = 0.0;
        bool counts = true;
        const auto noises = admissible_noises();
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto f = brownian(seed, 200 + i, 1.0, 1e-3);
            const auto& s = noises[i % noises.size()];
            const int n = 16 << (i % 5);
            const auto a = construct_by_hitting(f, s, n, 0.0);
            const auto b = construct_inductive(f, s, n, 0.0);
            counts &= a.event_times.size() == b.event_times.size();
            for (std::size_t k = 0; counts && k < a.event_times.size(); ++k)
                dt_worst = std::max(dt_worst, std::abs(a.event_times[k] - b.event_times[k]));
            x_worst = std::max(x_worst, sup_distance(a.x, b.x));
        }
        ok = counts && dt_worst <= 1e-12 && x_worst <= 1e-9;
        return fmt("max event-time gap", dt_worst) + ", " + fmt("max x gap", x_worst);
    }});

    checks.push_back({"scheme.exact_identities", [](std::uint64_t seed, bool& ok) {
        SchemeDiagnostics w;
        w.min_reflected = 0.0;
        double flat_ratio = 0.0;
        const auto noises = admissible_noises();
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto f = brownian(seed, 300 + i, 1.0, 1e-3);
            const auto s = construct_by_hitting(f, noises[i % noises.size()], 128, i % 2 ? 0.1 : 0.0);
            const auto d = diagnose(s);
            w.event_values = std::max(w.event_values, d.event_values);
            w.driver_drops = std::max(w.driver_drops, d.driver_drops);
            w.segment_scaling = std::max(w.segment_scaling, d.segment_scaling);
            w.running_min = std::max(w.running_min, d.running_min);
            w.min_reflected = std::min(w.min_reflected, d.min_reflected);
            const double LT = s.L.values().back();
            if (LT > 0.0) flat_ratio = std::max(flat_ratio, d.off_boundary_increase / LT);
        }
        ok = w.event_values <= 1e-9 && w.driver_drops <= 1e-9 && w.segment_scaling <= 1e-9 && w.running_min <= 1e-9 &&
             w.min_reflected >= -1e-9 && flat_ratio <= 1e-6;
        return fmt("x(t_i)+i/n", w.event_values) + ", " + fmt("drops", w.driver_drops) + ", " +
               fmt("min x+L", w.min_reflected) + ", " + fmt("off-boundary dL/L(T)", flat_ratio);
    }});

    checks.push_back({"scheme.oscillation_bound", [](std::uint64_t seed, bool& ok) {
        std::size_t violations = 0;
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 10; ++i) {
            const auto f = brownian(seed, 400 + i, 1.0, 1e-3);
            const auto s = construct_by_hitting(f, NoiseCoefficient::affine(1.0, 1.0), 256, 0.0);
            const auto c = check_oscillation(s, 0.25, 500, seed + i);
            violations += c.violations;
            worst = std::max(worst, c.worst_ratio);
        }
        ok = violations == 0;
        return fmt("worst |dx|/bound", worst);
    }});

    checks.push_back({"scheme.deterministic_oracle", [](std::uint64_t, bool& ok) {
        auto f = std::make_shared<const PiecewiseLinearPath>(std::vector<double>{0.0, 2.0}, std::vector<double>{0.0, -2.0});
        const auto r = refine_until(f, NoiseCoefficient::affine(1.0, 1.0), 0.0, 64, 1e-3, 16);
        double err = 0.0;
        const auto& x = r.final.x;
        for (std::size_t k = 0; k < x.size() && x.time(k) <= std::log(3.0); ++k)
            err = std::max(err, std::abs(x.value(k) - (1.0 - std::exp(x.time(k)))));
        bool decreasing = true;
        for (std::size_t k = 1; k < r.sup_gaps.size(); ++k) decreasing &= r.sup_gaps[k] < r.sup_gaps[k - 1];
        ok = r.converged && err <= 1e-2 && decreasing;
        return fmt("max |x - (1 - e^t)|", err);
    }});

    checks.push_back({"scheme.stability", [](std::uint64_t seed, bool& ok) {
        double worst = 0.0;
        const auto sigma = NoiseCoefficient::affine(1.0, 1.0);
        for (std::uint64_t i = 0; i < 5; ++i) {
            const auto f = brownian(seed, 500 + i, 1.0, 1e-3);
            const auto base = construct_by_hitting(f, sigma, 1024, 0.0);
            for (double eta : {1e-3, 1e-4}) {
                for (double zeta : {1e-3, 1e-4}) {
                    const auto moved = construct_by_hitting(f, sigma.shifted(zeta), 1024, eta);
                    worst = std::max(worst, sup_distance(base.x, moved.x) / (10.0 * (eta + zeta)));
                }
            }
        }
        ok = worst <= 1.0;
        return fmt("max gap / (10 (eta + zeta))", worst);
    }});

    checks.push_back({"reflected.quadratic_variation", [](std::uint64_t seed, bool& ok) {
        std::vector<double> rel;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto f = brownian(seed, 600 + i, 1.0, 1e-4);
            const auto s = construct_by_hitting(f, NoiseCoefficient::affine(1.0, 1.0), 1024, 0.0);
            const double qv = realized_qv(s.x, 1e-4).values().back();
            const double s2 = sigma2_integral(s.L, s.sigma_used).values().back();
            rel.push_back(std::abs(qv - s2) / s2);
        }
        const double mean = summarize("rel", rel).mean;
        ok = mean <= 0.05;
        return fmt("mean relative error", mean);
    }});

    checks.push_back({"reflected.martingale", [](std::uint64_t seed, bool& ok) {
        std::vector<double> inc;
        for (std::uint64_t i = 0; i < 2000; ++i) {
            const auto f = brownian(seed, 10000 + i, 1.0, 1e-2, 4);
            const auto s = construct_by_hitting(f, NoiseCoefficient::affine(1.0, 1.0), 256, 0.0);
            inc.push_back(s.x.values().back() - s.x.value(0));
        }
        const auto st = summarize("dX", inc);
        ok = std::abs(st.mean) <= 3.0 * *st.std_error;
        return fmt("mean", st.mean) + ", " + fmt("stderr", *st.std_error);
    }});

    checks.push_back({"reflected.local_time_unbiased", [](std::uint64_t seed, bool& ok) {
        std::vector<double> lam, lt;
        double min_y = 0.0;
        for (std::uint64_t i = 0; i < 40; ++i) {
            const auto f = brownian(seed, 700 + i, 1.0, 1e-4, 5);
            const auto rp = reflect(construct_by_hitting(f, NoiseCoefficient::affine(1.0, 1.0), 2048, 0.0));
            lam.push_back(occupation_local_time(rp, 0.0, 0.05, 1e-4 / 32).values().back());
            lt.push_back(rp.L.values().back());
            min_y = std::min(min_y, *std::min_element(rp.Y.values().begin(), rp.Y.values().end()));
        }
        const double ratio = summarize("lam", lam).mean / summarize("L", lt).mean;
        ok = std::abs(ratio - 1.0) <= 0.1 && min_y >= -1e-9;
        return fmt("mean Lambda(T,0) / mean L(T)", ratio);
    }});

    checks.push_back({"determinacy.time_change_and_extinction", [](std::uint64_t seed, bool& ok) {
        const int n = 512;
        double worst = 0.0;
        bool extinct = true;
        DeterminacyConfig cfg;
        cfg.p = 0.5;
        cfg.scheme_n = n;
        cfg.delta_ladder = default_ladder(6);
        cfg.sampler = {seed, 1e-3, 50.0, 1};
        for (std::uint64_t i = 0; i < 10; ++i) {
            auto f = brownian(seed, 800 + i, 50.0, 1e-3, 1);
            const auto run = run_ladder(cfg, f, i);
            for (const auto& r : run.rungs) {
                worst = std::max(worst, std::abs(r.L_scheme - (1.0 - r.delta)));
                const double slack = 0.5 * std::pow(r.delta, -0.5) * 2.0 / n;
                extinct &= r.noise <= std::pow(r.delta, 0.5) + slack;
            }
        }
        ok = worst <= 2.0 / n && extinct;
        return fmt("max |L(tau(S_p(1-delta))) - (1-delta)|", worst);
    }});

    checks.push_back({"determinacy.monotone_in_p", [](std::uint64_t seed, bool& ok) {
        const BrownianSampler s{seed, 1e-3, 100.0, 0};
        ok = true;
        for (std::uint64_t i = 0; i < 50; ++i) {
            std::optional<double> prev = 0.0;
            for (double p : {0.0, 0.25, 0.5, 0.75}) {
                const auto t = sample_tau_direct(p, s, i).tau;
                if (prev && t) ok &= *t >= *prev;
                if (!prev) ok &= !t;
                prev = t;
            }
        }
        return std::string(ok ? "nondecreasing" : "order violated");
    }});

    checks.push_back({"ensemble.schedule_independence", [](std::uint64_t seed, bool& ok) {
        const BrownianSampler s{seed, 1e-3, 50.0, 1};
        auto run = [&](unsigned workers) {
            EnsembleConfig ec{"check", seed, 200, workers};
            return run_ensemble(ec, [&](std::uint64_t i) { return sample_tau_direct(0.0, s, i); },
                                [](EnsembleReport& r, std::vector<TauSample>& v) {
                                    r.laplace.push_back(estimate_laplace(v, 1.0, 50.0));
                                });
        };
        ok = to_json(run(1)).dump() == to_json(run(4)).dump();
        return std::string(ok ? "identical" : "differs");
    }});

    checks.push_back({"ensemble.ks_sanity", [](std::uint64_t seed, bool& ok) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int within = 0;
        const int trials = 200, N = 1000;
        for (int k = 0; k < trials; ++k) {
            std::vector<double> x(N);
            for (double& v : x) v = u(rng);
            within += ks_distance(ecdf(x), [](double t) { return std::clamp(t, 0.0, 1.0); }) <= 1.63 / std::sqrt(N);
        }
        ok = within >= trials * 97 / 100;
        return fmt("fraction within 1.63/sqrt(N)", within / double(trials));
    }});

    checks.push_back({"ensemble.seed_uniqueness", [](std::uint64_t seed, bool& ok) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(1 << 18);
        for (std::uint64_t i = 0; i < 200000; ++i) seen.insert(per_path_seed(seed, i));
        ok = seen.size() == 200000;
        return fmt("distinct", static_cast<double>(seen.size()));
    }});

    return checks;
}

}  // namespace

std::vector<CheckResult> run_checks(std::uint64_t seed, std::ostream& log) {
    std::vector<CheckResult> results;
    for (auto& c : suite()) {
        CheckResult r{c.name, false, {}};
        try {
            r.detail = c.body(seed, r.passed);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        log << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n" << std::flush;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace loctime
