#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "loctime/determinacy.hpp"
#include "loctime/ensemble.hpp"
#include "loctime/error.hpp"
#include "loctime/seeding.hpp"

using namespace loctime;

namespace {

TauSample hit(double t) {
    TauSample s;
    s.tau = t;
    return s;
}

TauSample censored() { return TauSample{}; }

}  // namespace

TEST_CASE("per-path seeds are distinct over a million indices") {
    CHECK(per_path_seed(3, 7) == per_path_seed(3, 7));
    CHECK(per_path_seed(3, 0) != per_path_seed(3, 1));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1 << 21);
    for (std::uint64_t i = 0; i < 1000000; ++i) seen.insert(per_path_seed(12345, i));
    CHECK(seen.size() == 1000000);
}

TEST_CASE("summarize") {
    const double one[] = {2.5};
    const auto s1 = summarize("x", one);
    CHECK(s1.mean == 2.5);
    CHECK_FALSE(s1.std_error.has_value());
    const double v[] = {1.0, 2.0, 3.0, 4.0};
    const auto s = summarize("x", v);
    CHECK(s.mean == 2.5);
    CHECK(*s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(s.n == 4);
}

TEST_CASE("ecdf") {
    const double single[] = {1.0};
    const auto e = ecdf(single);
    CHECK(e(0.999) == 0.0);
    CHECK(e(1.0) == 1.0);

    const double rep[] = {1.0, 1.0, 2.0};
    const auto r = ecdf(rep);
    CHECK(r(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(r(1.5) == doctest::Approx(2.0 / 3.0));
    CHECK(r(2.0) == 1.0);

    const double unsorted[] = {3.0, 1.0, 2.0, 1.5};
    const double sorted[] = {1.0, 1.5, 2.0, 3.0};
    const auto a = ecdf(unsorted), b = ecdf(sorted);
    CHECK(a.x == b.x);
    CHECK(a.F == b.F);

    const double part[] = {1.0, 2.0};
    const auto c = ecdf(part, 4);
    CHECK(c(10.0) == 0.5);

    CHECK_THROWS_AS(ecdf(std::span<const double>{}), UsageError);
}

TEST_CASE("ks_distance") {
    const double xs[] = {0.1, 0.4, 0.4, 0.9};
    const auto e = ecdf(xs);
    CHECK(ks_distance(e, [&](double t) { return e(t); }) == 0.0);
    const double mid[] = {0.0};
    CHECK(ks_distance(ecdf(mid), [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }) == doctest::Approx(0.5));

    // continuous reference: the left limit term counts
    const double two[] = {0.25, 0.75};
    CHECK(ks_distance(ecdf(two), [](double t) { return t; }) == doctest::Approx(0.25));
    const double low[] = {0.9};
    CHECK(ks_distance(ecdf(low), [](double t) { return t; }) == doctest::Approx(0.9));
}

TEST_CASE("KS of uniform samples stays within 1.63 / sqrt(N) in 99% of trials") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int trials = 500, N = 2000;
    int within = 0;
    for (int k = 0; k < trials; ++k) {
        std::vector<double> x(N);
        for (double& v : x) v = u(rng);
        within += ks_distance(ecdf(x), [](double t) { return t; }) <= 1.63 / std::sqrt(N);
    }
    CHECK(within >= 0.98 * trials);
}

TEST_CASE("estimate_laplace") {
    const std::vector<TauSample> zeros(5, hit(0.0));
    const auto z = estimate_laplace(zeros, 1.0, 10.0);
    CHECK(*z.mean == 1.0);
    CHECK(z.std_error == 0.0);
    CHECK(z.n_censored == 0);

    const std::vector<TauSample> none(4, censored());
    const auto c = estimate_laplace(none, 1.0, 2.0);
    CHECK_FALSE(c.mean.has_value());
    CHECK(c.n_censored == 4);
    CHECK(c.lower == 0.0);
    CHECK(c.upper == doctest::Approx(std::exp(-2.0)));

    const std::vector<TauSample> mix{hit(1.0), censored()};
    const auto m = estimate_laplace(mix, 0.5, 4.0);
    CHECK(*m.mean == doctest::Approx(0.5 * std::exp(-0.5)));
    CHECK(m.upper - m.lower == doctest::Approx(0.5 * std::exp(-2.0)));

    CHECK_THROWS_AS(estimate_laplace(std::vector<TauSample>{}, 1.0, 1.0), UsageError);
    CHECK_THROWS_AS(estimate_laplace(mix, 0.0, 1.0), DomainError);
}

TEST_CASE("run_ensemble: single path, failures, schedule independence") {
    auto reduce = [](EnsembleReport& r, std::vector<double>& v) { r.statistics.push_back(summarize("v", v)); };

    const auto one = run_ensemble(EnsembleConfig{"one", 1, 1, 1}, [](std::uint64_t) { return 4.0; }, reduce);
    CHECK(one.statistics[0].mean == 4.0);
    CHECK_FALSE(one.statistics[0].std_error.has_value());
    CHECK(to_json(one)["statistics"][0]["std_error"].is_null());

    const auto failing = run_ensemble(
        EnsembleConfig{"fail", 1, 10, 3},
        [](std::uint64_t i) -> double {
            if (i % 4 == 1) throw std::runtime_error("boom");
            return static_cast<double>(i);
        },
        reduce);
    CHECK(failing.partial());
    CHECK(failing.completed == 7);
    REQUIRE(failing.failures.size() == 3);
    CHECK(failing.failures[0].first == 1);
    CHECK(failing.failures[2].first == 9);
    CHECK(to_json(failing)["failures"].size() == 3);

    CHECK_THROWS_AS(run_ensemble(EnsembleConfig{"none", 1, 0, 1}, [](std::uint64_t) { return 0.0; }, reduce), ConfigError);

    const BrownianSampler s{21, 1e-2, 20.0, 1};
    auto task = [&](std::uint64_t i) { return sample_tau_direct(0.5, s, i); };
    auto tau_reduce = [](EnsembleReport& r, std::vector<TauSample>& v) {
        std::vector<double> taus;
        for (const auto& t : v)
            if (t.tau) taus.push_back(*t.tau);
        r.statistics.push_back(summarize("tau", taus));
        r.laplace.push_back(estimate_laplace(v, 1.0, 20.0));
        r.ecdf = ecdf(taus, v.size());
    };
    const auto base = to_json(run_ensemble(EnsembleConfig{"tau", 21, 300, 1}, task, tau_reduce)).dump();
    for (unsigned w : {2u, 4u, 8u})
        CHECK(to_json(run_ensemble(EnsembleConfig{"tau", 21, 300, w}, task, tau_reduce)).dump() == base);
    CHECK(base.find("\"master_seed\":21") != std::string::npos);
    CHECK(base.find("wall") == std::string::npos);
}

TEST_CASE("martingale: mean of X(T) - X(0) is zero within three standard errors") {
    // X here is a plain Brownian driver; the scheme version runs in the acceptance suite.
    const BrownianSampler s{31, 0.05, 1.0, 0};
    auto r = run_ensemble(EnsembleConfig{"m", 31, 10000, 1},
                          [&](std::uint64_t i) { return sample_brownian(s, i).values().back(); },
                          [](EnsembleReport& rep, std::vector<double>& v) { rep.statistics.push_back(summarize("dX", v)); });
    CHECK(std::abs(r.statistics[0].mean) <= 3.0 * *r.statistics[0].std_error);
}
