#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loctime/brownian.hpp"
#include "loctime/error.hpp"
#include "loctime/seeding.hpp"

using namespace loctime;

TEST_CASE("sampled paths start at zero and are deterministic") {
    const BrownianSampler s{42, 0.01, 1.0, 0};
    const auto a = sample_brownian(s, 3);
    CHECK(a.value(0) == 0.0);
    CHECK(a.size() == 101);
    CHECK(a.horizon() == 1.0);
    CHECK(a == sample_brownian(s, 3));
    CHECK_FALSE(a == sample_brownian(s, 4));
    CHECK_FALSE(a == sample_brownian({43, 0.01, 1.0, 0}, 3));
}

TEST_CASE("sampler validation") {
    CHECK_THROWS_AS(sample_brownian({1, 1.0, 1.0, 0}, 0), ConfigError);
    CHECK_THROWS_AS(sample_brownian({1, 2.0, 1.0, 0}, 0), ConfigError);
    CHECK_THROWS_AS(sample_brownian({1, 0.0, 1.0, 0}, 0), ConfigError);
    CHECK_THROWS_AS(sample_brownian({1, 0.1, 1.0, -1}, 0), ConfigError);
}

TEST_CASE("knots sit on the refined grid, last step may be short") {
    const auto p = sample_brownian({1, 0.3, 1.0, 2}, 0);
    CHECK(p.size() == 4 * 4 + 1);
    CHECK(p.time(1) == doctest::Approx(0.075));
    CHECK(p.horizon() == 1.0);
}

TEST_CASE("endpoint variance of B(1) is one") {
    const BrownianSampler s{2024, 0.05, 1.0, 0};
    const int N = 100000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double b = sample_brownian(s, i).values().back();
        sum += b;
        sum2 += b * b;
        sum4 += b * b * b * b;
    }
    const double mean = sum / N;
    const double var = sum2 / N - mean * mean;
    const double se = std::sqrt((sum4 / N - (sum2 / N) * (sum2 / N)) / N);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(N));
    CHECK(std::abs(var - 1.0) <= 3.0 * se);
}

TEST_CASE("refine_bridge") {
    const BrownianSampler s{7, 0.1, 1.0, 0};
    const auto p = sample_brownian(s, 0);
    CHECK(refine_bridge(p, s, 0) == p);
    const auto r1 = refine_bridge(p, s, 1);
    CHECK(r1.size() == 2 * (p.size() - 1) + 1);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(r1(p.time(k)) == p.value(k));
    CHECK(refine_bridge(p, s, 1) == r1);
    const auto r3 = refine_bridge(p, s, 3);
    CHECK(r3.size() == 8 * (p.size() - 1) + 1);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(r3(p.time(k)) == p.value(k));

    CHECK_THROWS_AS(refine_bridge(p, {7, 0.1, 2.0, 0}, 1), ConfigError);
}

TEST_CASE("bridge midpoints have the Brownian-bridge variance") {
    // Midpoint of a bridge over span h has variance h / 4 around the chord.
    const BrownianSampler s{99, 0.2, 1.0, 0};
    double sum2 = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < 4000; ++i) {
        const auto p = sample_brownian(s, i);
        const auto r = refine_bridge(p, s, 1);
        for (std::size_t k = 0; k + 1 < p.size(); ++k) {
            const double d = r.value(2 * k + 1) - 0.5 * (p.value(k) + p.value(k + 1));
            sum2 += d * d;
            ++count;
        }
    }
    CHECK(sum2 / count == doctest::Approx(0.05).epsilon(0.03));
}

TEST_CASE("streaming first passage equals the materialised crossing") {
    const BrownianSampler s{5, 1e-2, 10.0, 2};
    const double levels[] = {0.25, 0.5, 1.0, 2.0, 50.0};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto path = sample_brownian(s, i);
        const auto fp = first_passage(s, i, levels);
        for (std::size_t k = 0; k < 5; ++k) CHECK(fp.times[k] == hitting_time(path, levels[k]));
        CHECK_FALSE(fp.times[4].has_value());
        CHECK(fp.running_max_drop == running_min(path).values().back());
    }
}

TEST_CASE("stream emits the materialised knots") {
    const BrownianSampler s{8, 0.1, 1.0, 2};
    BrownianStream st(s, 1);
    std::vector<double> t(st.knots_per_step()), v(st.knots_per_step());
    const auto path = sample_brownian(s, 1);
    std::size_t k = 0;
    while (st.next(t, v)) {
        for (std::size_t j = 0; j < t.size(); ++j) {
            CHECK(t[j] == path.time(k + j));
            CHECK(v[j] == path.value(k + j));
        }
        k += t.size() - 1;
    }
    CHECK(k + 1 == path.size());
}

TEST_CASE("per-path seeds") {
    CHECK(per_path_seed(1, 0) == per_path_seed(1, 0));
    CHECK(per_path_seed(1, 0) != per_path_seed(1, 1));
    CHECK(per_path_seed(1, 0) != per_path_seed(2, 0));
}
