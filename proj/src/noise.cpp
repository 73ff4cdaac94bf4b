#include "loctime/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loctime/error.hpp"

namespace loctime {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

NoiseCoefficient NoiseCoefficient::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("constant sigma needs c > 0");
    return {Constant{c}, 0.0, c};
}

NoiseCoefficient NoiseCoefficient::affine(double intercept, double slope) {
    if (!(intercept > 0.0) || !std::isfinite(intercept)) throw ConfigError("affine sigma needs intercept > 0");
    if (!(slope >= 0.0) || !std::isfinite(slope))
        throw ConfigError("affine sigma needs slope >= 0 to stay bounded away from zero on [0, inf)");
    return {Affine{intercept, slope}, slope, intercept};
}

NoiseCoefficient NoiseCoefficient::power_law(double p) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("power-law sigma needs p >= 0");
    // p < 1 has unbounded slope at l = 1 (p = 0 jumps there).
    const double K = p >= 1.0 ? p : std::numeric_limits<double>::infinity();
    return {PowerLaw{p}, K, 0.0};
}

NoiseCoefficient NoiseCoefficient::truncated_power_law(double p, double delta) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("truncated power-law sigma needs p >= 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("truncated power-law sigma needs delta in (0, 1]");
    double K = 0.0;
    if (p >= 1.0)
        K = delta < 1.0 ? p : 0.0;
    else if (p > 0.0)
        K = delta < 1.0 ? p * std::pow(delta, p - 1.0) : 0.0;
    return {TruncatedPowerLaw{p, delta}, K, std::pow(delta, p)};
}

NoiseCoefficient NoiseCoefficient::tabulated(PiecewiseLinearPath table) {
    const auto ts = table.times();
    const auto vs = table.values();
    double K = 0.0;
    double lo = vs[0];
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (!(vs[k] > 0.0)) throw ConfigError("tabulated sigma values must be > 0");
        lo = std::min(lo, vs[k]);
        if (k + 1 < ts.size()) K = std::max(K, std::abs(vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k]));
    }
    return {Tabulated{std::move(table)}, K, lo};
}

double NoiseCoefficient::operator()(double ell) const {
    if (!(ell >= 0.0)) throw DomainError("sigma evaluated at negative local time");
    const double x = ell + shift_;
    return std::visit(overloaded{
                          [](const Constant& k) { return k.c; },
                          [x](const Affine& k) { return k.intercept + k.slope * x; },
                          [x](const PowerLaw& k) { return x <= 1.0 ? std::pow(1.0 - x, k.p) : 0.0; },
                          [x](const TruncatedPowerLaw& k) {
                              return x <= 1.0 - k.delta ? std::pow(1.0 - x, k.p) : std::pow(k.delta, k.p);
                          },
                          [x](const Tabulated& k) {
                              if (x > k.table.horizon()) throw DomainError("sigma evaluated beyond its table");
                              return k.table(x);
                          },
                      },
                      kind_);
}

std::string NoiseCoefficient::name() const {
    return std::visit(overloaded{
                          [](const Constant&) { return std::string("constant"); },
                          [](const Affine&) { return std::string("affine"); },
                          [](const PowerLaw&) { return std::string("power"); },
                          [](const TruncatedPowerLaw&) { return std::string("truncated_power"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      kind_);
}

NoiseCoefficient NoiseCoefficient::shifted(double shift) const {
    if (!(shift >= 0.0)) throw DomainError("sigma domain shift must be >= 0");
    NoiseCoefficient out = *this;
    out.shift_ += shift;
    if (auto m = domain_max(); m && *m <= shift) throw DomainError("shift leaves the tabulated domain");
    return out;
}

std::optional<double> NoiseCoefficient::domain_max() const {
    if (const auto* t = std::get_if<Tabulated>(&kind_)) return t->table.horizon() - shift_;
    return std::nullopt;
}

NoiseConstants constants(const NoiseCoefficient& sigma) { return {sigma.lipschitz(), sigma.lower_bound()}; }

}  // namespace loctime
