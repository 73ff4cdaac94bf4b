#include "loctime/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "loctime/error.hpp"

namespace loctime {

namespace {

void check_inputs(const std::shared_ptr<const PiecewiseLinearPath>& f, const NoiseCoefficient& sigma, int n,
                  double x0) {
    if (!f) throw UsageError("scheme needs a driver path");
    if (n < 1) throw DomainError("scheme level n must be >= 1");
    if (!(x0 >= 0.0)) throw DomainError("initial value x0 must be >= 0");
    if (!(sigma.lower_bound() > 0.0)) throw DomainError("scheme needs sigma bounded away from zero (delta > 0)");
}

double level_of(std::size_t i, int n) { return static_cast<double>(i) / static_cast<double>(n); }

// sigma(i/n), evaluated once per event index.
class SigmaLadder {
public:
    SigmaLadder(const NoiseCoefficient& sigma, int n) : sigma_(&sigma), n_(n) {}
    double operator()(std::size_t i) {
        while (cache_.size() <= i) cache_.push_back((*sigma_)(level_of(cache_.size(), n_)));
        return cache_[i];
    }

private:
    const NoiseCoefficient* sigma_;
    int n_;
    std::vector<double> cache_;
};

SchemeSolution finish(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma, int n, double x0,
                      std::vector<double> events, std::vector<double> thresholds, std::vector<double> times,
                      std::vector<double> values) {
    auto x = PiecewiseLinearPath::trusted(std::move(times), std::move(values));
    auto L = running_min(x);
    return SchemeSolution{n, std::move(events), std::move(thresholds), std::move(x), std::move(L), sigma, x0,
                          std::move(f)};
}

}  // namespace

std::optional<long long> lemma2_C(const NoiseCoefficient& sigma, double eps) {
    const double K = sigma.lipschitz();
    if (K == 0.0) return std::nullopt;
    if (!std::isfinite(K)) throw DomainError("lemma2_C needs a finite Lipschitz constant");
    if (!(eps > 0.0) || eps >= 1.0 / K) throw DomainError("lemma2_C needs 0 < eps < 1/K");
    const double s0 = sigma(0.0);
    const double target = 1.0 / K - eps;
    auto ok = [&](long long C) {
        const double c = static_cast<double>(C);
        return c / (K * c + s0) > target;
    };
    // C > target * s0 / (K eps) in exact arithmetic; step to the first
    // integer the floating-point test accepts.
    long long C = std::max<long long>(1, static_cast<long long>(std::floor(target * s0 / (K * eps))));
    while (C > 1 && ok(C - 1)) --C;
    while (!ok(C)) ++C;
    return C;
}

double oscillation_constant(const NoiseCoefficient& sigma, double eps) {
    const double delta = sigma.lower_bound();
    if (!(delta > 0.0)) throw DomainError("oscillation constant needs delta > 0");
    const double K = sigma.lipschitz();
    const auto C = lemma2_C(sigma, eps);
    const double c = C ? static_cast<double>(*C) : 0.0;
    return 2.0 * (sigma(0.0) + K * c) + K + 2.0 + 1.0 / delta;
}

std::vector<double> build_thresholds(const NoiseCoefficient& sigma, int n, std::size_t i_max) {
    if (n < 1) throw DomainError("threshold level n must be >= 1");
    if (!(sigma.lower_bound() > 0.0)) throw DomainError("thresholds need sigma bounded away from zero (delta > 0)");
    std::vector<double> a(i_max + 1);
    a[0] = 0.0;
    for (std::size_t i = 0; i < i_max; ++i) a[i + 1] = a[i] + 1.0 / (n * sigma(level_of(i, n)));
    return a;
}

SchemeSolution construct_by_hitting(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                                    int n, double x0) {
    check_inputs(f, sigma, n, x0);
    SigmaLadder sig(sigma, n);

    // The first event fires once f has dropped (x0 + 1/n)/sigma(0) below f(0),
    // so thresholds are crossed by g = x0/sigma(0) + f - f(0).
    const double shift = x0 / sig(0) - f->value(0);
    std::optional<PiecewiseLinearPath> shifted;
    if (shift != 0.0) {
        std::vector<double> gv(f->values().begin(), f->values().end());
        for (double& v : gv) v += shift;
        shifted = PiecewiseLinearPath::trusted(std::vector<double>(f->times().begin(), f->times().end()),
                                               std::move(gv));
    }
    const PiecewiseLinearPath& g = shifted ? *shifted : *f;

    std::vector<double> thresholds{0.0};
    std::vector<double> events;
    HittingSweep sweep(g);
    for (std::size_t i = 0;; ++i) {
        const double next = thresholds.back() + 1.0 / (n * sig(i));
        const auto t = sweep.next(next);
        if (!t) break;
        events.push_back(*t);
        thresholds.push_back(next);
    }

    // x(t) = x0 + sum_i sigma(i/n) (f(t ^ t_{i+1}) - f(t ^ t_i)).
    const auto ts = f->times();
    const auto fs = f->values();
    std::vector<double> times, values;
    times.reserve(ts.size() + events.size());
    values.reserve(ts.size() + events.size());
    double prefix = x0;          // x(t_i)
    double f_anchor = fs[0];     // f(t_i)
    std::size_t i = 0;           // current event segment
    std::size_t k = 0;           // driver segment holding the cursor
    auto f_at = [&](double t) {
        while (k + 2 < ts.size() && ts[k + 1] <= t) ++k;
        return ts.size() == 1 ? fs[0] : interpolate(ts[k], ts[k + 1], fs[k], fs[k + 1], t);
    };
    auto push = [&](double t, double v) {
        if (!times.empty() && t <= times.back()) return;
        times.push_back(t);
        values.push_back(v);
    };
    std::size_t e = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        while (e < events.size() && events[e] <= ts[j]) {
            const double fe = f_at(events[e]);
            prefix += sig(i) * (fe - f_anchor);
            f_anchor = fe;
            ++i;
            push(events[e], prefix);
            ++e;
        }
        push(ts[j], prefix + sig(i) * (f_at(ts[j]) - f_anchor));
    }
    return finish(std::move(f), sigma, n, x0, std::move(events), std::move(thresholds), std::move(times),
                  std::move(values));
}

SchemeSolution construct_inductive(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                                   int n, double x0) {
    check_inputs(f, sigma, n, x0);
    SigmaLadder sig(sigma, n);
    const auto ts = f->times();
    const auto fs = f->values();

    std::vector<double> events, times, values;
    times.reserve(ts.size());
    values.reserve(ts.size());
    times.push_back(ts[0]);
    values.push_back(x0);

    std::size_t i = 0;
    double x_anchor = x0;       // x(t_i)
    double f_anchor = fs[0];    // f(t_i)
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double f0 = fs[k];
        const double f1 = fs[k + 1];
        // t_{i+1}: first t with x(t_i) + sigma(i/n) (f(t) - f(t_i)) < -(i+1)/n.
        for (;;) {
            const double barrier = -static_cast<double>(i + 1) / n;
            const double f_target = f_anchor + (barrier - x_anchor) / sig(i);
            if (!(f1 < f_target)) break;
            const double te = segment_crossing(ts[k], ts[k + 1], f0, f1, f_target);
            events.push_back(te);
            ++i;
            x_anchor = barrier;
            f_anchor = f_target;
            if (te > times.back()) {
                times.push_back(te);
                values.push_back(barrier);
            }
        }
        if (ts[k + 1] > times.back()) {
            times.push_back(ts[k + 1]);
            values.push_back(x_anchor + sig(i) * (f1 - f_anchor));
        }
    }
    auto thresholds = build_thresholds(sigma, n, events.size());
    return finish(std::move(f), sigma, n, x0, std::move(events), std::move(thresholds), std::move(times),
                  std::move(values));
}

double sup_distance(const SchemeSolution& a, const SchemeSolution& b) {
    if (!a.driver || !b.driver || (a.driver != b.driver && *a.driver != *b.driver))
        throw UsageError("sup_distance needs solutions built on the same driver");
    if (a.x0 != b.x0) throw UsageError("sup_distance needs solutions with the same x0");
    return std::max(sup_distance(a.x, b.x), sup_distance(a.L, b.L));
}

ConvergenceReport refine_until(std::shared_ptr<const PiecewiseLinearPath> f, const NoiseCoefficient& sigma,
                               double x0, int n0, double tol, int max_doublings) {
    if (!(tol > 0.0)) throw DomainError("refine_until needs tol > 0");
    if (n0 < 1) throw DomainError("refine_until needs n0 >= 1");
    ConvergenceReport report{{n0}, {}, construct_by_hitting(f, sigma, n0, x0), false, tol};
    int n = n0;
    for (int d = 0; d < max_doublings; ++d) {
        n *= 2;
        auto next = construct_by_hitting(f, sigma, n, x0);
        const double gap = sup_distance(report.final, next);
        report.levels.push_back(n);
        report.sup_gaps.push_back(gap);
        report.final = std::move(next);
        if (gap <= tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

std::string format_report(const ConvergenceReport& report) {
    std::string out;
    char buf[64];
    out += "levels:";
    for (int n : report.levels) out += " " + std::to_string(n);
    out += "\nsup_gaps:";
    for (double g : report.sup_gaps) {
        std::snprintf(buf, sizeof buf, " %.17g", g);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", report.tol);
    out += "\ntol: " + std::string(buf);
    out += "\nconverged: " + std::string(report.converged ? "true" : "false");
    out += "\nfinal_n: " + std::to_string(report.final.n);
    out += "\nfinal_events: " + std::to_string(report.final.event_times.size());
    out += "\nsigma: " + report.final.sigma_used.name();
    std::snprintf(buf, sizeof buf, "%.17g", report.final.x0);
    out += "\nx0: " + std::string(buf) + "\n";
    return out;
}

OscillationCheck check_oscillation(const SchemeSolution& s, double eps, std::size_t pairs, std::uint64_t seed) {
    OscillationCheck out;
    const auto& f = *s.driver;
    const double K = s.sigma_used.lipschitz();
    out.constant = oscillation_constant(s.sigma_used, eps);
    out.window_end = f.horizon();
    if (K > 0.0) {
        const double shift = s.x0 / s.sigma_used(0.0) - f.value(0);
        std::vector<double> gv(f.values().begin(), f.values().end());
        for (double& v : gv) v += shift;
        auto g = PiecewiseLinearPath::trusted(std::vector<double>(f.times().begin(), f.times().end()), std::move(gv));
        if (auto t = hitting_time(g, 1.0 / K - eps)) out.window_end = *t;
    }
    const auto xs = s.x.times();
    const auto last = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), out.window_end) - xs.begin());
    if (last < 2) return out;

    double f_norm = 0.0;
    for (std::size_t j = 0; j < f.size() && f.time(j) <= out.window_end; ++j) f_norm = std::max(f_norm, std::abs(f.value(j)));
    f_norm = std::max(f_norm, std::abs(f(out.window_end)));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, last - 1);
    const double C = out.constant;
    while (out.pairs < pairs) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const double sT = xs[a], tT = xs[b];
        const double fs = f(sT);
        double osc = std::abs(f(tT) - fs);
        const auto ft = f.times();
        for (auto j = static_cast<std::size_t>(std::upper_bound(ft.begin(), ft.end(), sT) - ft.begin());
             j < f.size() && ft[j] < tT; ++j)
            osc = std::max(osc, std::abs(f.value(j) - fs));
        const double bound = 4.0 * K * f_norm * (1.0 / s.n + C * osc) + C * osc;
        const double dx = std::abs(s.x.value(b) - s.x.value(a));
        ++out.pairs;
        if (dx > bound + 1e-12) ++out.violations;
        if (bound > 0.0) out.worst_ratio = std::max(out.worst_ratio, dx / bound);
    }
    return out;
}

}  // namespace loctime

namespace loctime {

SchemeDiagnostics diagnose(const SchemeSolution& s, double eps_flat) {
    SchemeDiagnostics d;
    const auto& f = *s.driver;
    const auto& ev = s.event_times;
    const int n = s.n;
    for (std::size_t i = 0; i < ev.size(); ++i)
        d.event_values = std::max(d.event_values, std::abs(s.x(ev[i]) + static_cast<double>(i + 1) / n));

    double prev_t = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double sig = s.sigma_used(static_cast<double>(i) / n);
        const double expected = i == 0 ? -(s.x0 + 1.0 / n) / sig : -1.0 / (n * sig);
        d.driver_drops = std::max(d.driver_drops, std::abs(f(ev[i]) - f(prev_t) - expected));
        prev_t = ev[i];
    }

    std::size_t i = 0;
    double anchor_t = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double t = f.time(k);
        while (i < ev.size() && ev[i] <= t) anchor_t = ev[i++];
        const double sig = s.sigma_used(static_cast<double>(i) / n);
        const double x_anchor = i == 0 ? s.x0 : s.x(anchor_t);
        const double defect = s.x(t) - x_anchor - sig * (f(t) - f(anchor_t));
        d.segment_scaling = std::max(d.segment_scaling, std::abs(defect));
    }

    d.running_min = sup_distance(s.L, loctime::running_min(s.x));

    const auto Y = add(s.x, s.L);
    const auto l = sample_on(s.L, Y.times());
    d.min_reflected = *std::min_element(Y.values().begin(), Y.values().end());
    for (std::size_t k = 0; k + 1 < Y.size(); ++k) {
        if (std::min(Y.value(k), Y.value(k + 1)) > eps_flat) d.off_boundary_increase += l[k + 1] - l[k];
    }
    return d;
}

}  // namespace loctime
