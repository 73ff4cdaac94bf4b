#include "loctime/ensemble.hpp"

#include <cmath>
#include <limits>

#include "loctime/error.hpp"

namespace loctime {

Statistic summarize(std::string name, std::span<const double> values) {
    Statistic s;
    s.name = std::move(name);
    s.n = values.size();
    if (values.empty()) throw UsageError("summarize needs at least one value");
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

double Ecdf::operator()(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    if (it == x.begin()) return 0.0;
    return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

Ecdf ecdf(std::span<const double> samples, std::size_t n_total) {
    if (samples.empty()) throw UsageError("ecdf needs at least one sample");
    if (n_total == 0) n_total = samples.size();
    if (n_total < samples.size()) throw UsageError("ecdf total count is smaller than the sample count");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    Ecdf out;
    out.n_total = n_total;
    const double N = static_cast<double>(n_total);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.x.push_back(sorted[i]);
        out.F.push_back(static_cast<double>(i + 1) / N);
    }
    return out;
}

double ks_distance(const Ecdf& empirical, const std::function<double(double)>& reference_cdf) {
    double worst = 0.0;
    double before = 0.0;
    for (std::size_t i = 0; i < empirical.x.size(); ++i) {
        const double F = reference_cdf(empirical.x[i]);
        const double F_left = reference_cdf(std::nextafter(empirical.x[i], -std::numeric_limits<double>::infinity()));
        worst = std::max({worst, std::abs(empirical.F[i] - F), std::abs(before - F_left)});
        before = empirical.F[i];
    }
    return worst;
}

LaplaceEstimate estimate_laplace(std::span<const TauSample> taus, double lambda, double horizon) {
    if (taus.empty()) throw UsageError("estimate_laplace needs at least one sample");
    if (!(lambda > 0.0)) throw DomainError("estimate_laplace needs lambda > 0");
    LaplaceEstimate est;
    est.lambda = lambda;
    est.n_total = taus.size();
    std::vector<double> terms;
    terms.reserve(taus.size());
    for (const auto& s : taus) {
        if (s.censored()) {
            ++est.n_censored;
            terms.push_back(0.0);
        } else {
            terms.push_back(std::exp(-lambda * *s.tau));
        }
    }
    const auto stat = summarize("laplace", terms);
    const double N = static_cast<double>(est.n_total);
    est.lower = stat.mean;
    est.upper = stat.mean + static_cast<double>(est.n_censored) / N * std::exp(-lambda * horizon);
    est.std_error = stat.std_error.value_or(0.0);
    if (est.n_censored < est.n_total) est.mean = stat.mean;
    return est;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const EnsembleReport& report) {
    using json = nlohmann::ordered_json;
    json j;
    j["experiment"] = report.experiment;
    j["master_seed"] = report.master_seed;
    j["num_paths"] = report.num_paths;
    j["completed"] = report.completed;
    j["partial"] = report.partial();
    json failures = json::array();
    for (const auto& [index, message] : report.failures) failures.push_back(json{{"path_index", index}, {"error", message}});
    j["failures"] = failures;
    json stats = json::array();
    for (const auto& s : report.statistics) {
        stats.push_back(json{{"name", s.name}, {"n", s.n}, {"mean", s.mean}, {"std_error", optional_number(s.std_error)}});
    }
    j["statistics"] = stats;
    json lap = json::array();
    for (const auto& e : report.laplace) {
        lap.push_back(json{{"lambda", e.lambda},
                           {"n_total", e.n_total},
                           {"n_censored", e.n_censored},
                           {"mean", optional_number(e.mean)},
                           {"std_error", e.std_error},
                           {"lower", e.lower},
                           {"upper", e.upper},
                           {"reference", optional_number(e.reference)}});
    }
    j["laplace"] = lap;
    j["ks_distance"] = optional_number(report.ks_distance);
    j["ks_reference"] = report.ks_reference;
    if (report.ecdf) {
        j["ecdf"] = json{{"n_total", report.ecdf->n_total}, {"x", report.ecdf->x}, {"F", report.ecdf->F}};
    }
    j["config"] = report.config_echo;
    return j;
}

}  // namespace loctime
