#include "loctime/reflected.hpp"

#include <algorithm>
#include <cmath>

#include "loctime/error.hpp"

namespace loctime {

ReflectedPath reflect(const PiecewiseLinearPath& x, const NoiseCoefficient& sigma) {
    auto L = running_min(x);
    auto Y = add(x, L);
    return {std::move(Y), std::move(L), x, sigma};
}

ReflectedPath reflect(const SchemeSolution& s) {
    auto Y = add(s.x, s.L);
    return {std::move(Y), s.L, s.x, s.sigma_used};
}

namespace {

std::vector<double> checked_grid(const PiecewiseLinearPath& p, double grid_dt) {
    if (!(grid_dt > 0.0)) throw DomainError("grid step must be positive");
    if (grid_dt > p.horizon()) throw DomainError("grid step is coarser than the path horizon");
    return uniform_grid(p.horizon(), grid_dt);
}

}  // namespace

PiecewiseLinearPath realized_qv(const PiecewiseLinearPath& X, double grid_dt) {
    auto grid = checked_grid(X, grid_dt);
    const auto xv = sample_on(X, grid);
    std::vector<double> qv(grid.size());
    qv[0] = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double d = xv[k] - xv[k - 1];
        qv[k] = qv[k - 1] + d * d;
    }
    return PiecewiseLinearPath::trusted(std::move(grid), std::move(qv));
}

PiecewiseLinearPath sigma2_integral(const PiecewiseLinearPath& L, const NoiseCoefficient& sigma) {
    const auto ts = L.times();
    const auto ls = L.values();
    std::vector<double> acc(ts.size());
    acc[0] = 0.0;
    const double node = 0.5 / std::sqrt(3.0);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double h = ts[k + 1] - ts[k];
        const double mid = 0.5 * (ls[k] + ls[k + 1]);
        const double rise = ls[k + 1] - ls[k];
        const double s1 = sigma(std::max(0.0, mid - node * rise));
        const double s2 = sigma(std::max(0.0, mid + node * rise));
        acc[k + 1] = acc[k] + 0.5 * h * (s1 * s1 + s2 * s2);
    }
    return PiecewiseLinearPath::trusted(std::vector<double>(ts.begin(), ts.end()), std::move(acc));
}

PiecewiseLinearPath occupation_local_time(const ReflectedPath& rp, double a, double eps, double grid_dt) {
    if (!(eps > 0.0)) throw DomainError("occupation window eps must be > 0");
    if (!(a >= 0.0)) throw DomainError("occupation level must be >= 0");
    auto grid = checked_grid(rp.Y, grid_dt);
    const auto y = sample_on(rp.Y, grid);
    const auto l = sample_on(rp.L, grid);
    const double lo = std::max(0.0, a - eps);
    const double hi = a + eps;
    const double norm = 1.0 / (2.0 * (hi - lo));
    std::vector<double> lam(grid.size());
    lam[0] = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        double inc = 0.0;
        const double yk = y[k - 1];
        if (yk >= lo && yk <= hi) {
            const double s = rp.sigma_used(l[k - 1]);
            inc = s * s * (grid[k] - grid[k - 1]) * norm;
        }
        lam[k] = lam[k - 1] + inc;
    }
    return PiecewiseLinearPath::trusted(std::move(grid), std::move(lam));
}

double tanaka_residual(const ReflectedPath& rp, double a, double eps, double grid_dt) {
    if (!(a >= 0.0)) throw DomainError("Tanaka level must be >= 0");
    const auto lam = occupation_local_time(rp, a, eps, grid_dt);
    const auto grid = lam.times();
    const auto y = sample_on(rp.Y, grid);
    const auto x = sample_on(rp.X, grid);
    // dY = dX + dL and L only grows where Y = 0 <= a, so the dL part of
    // int 1{Y > a} dY vanishes and only the martingale part is summed.
    // {Y = 0} is d<X>-null, so at a = 0 the integrand is 1 against dX; the
    // discrete path sitting on the boundary over whole segments is an
    // artefact of the linear interpolation.
    const double start = std::max(y[0] - a, 0.0);
    double integral = 0.0;
    double worst = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (a == 0.0 || y[k - 1] > a) integral += x[k] - x[k - 1];
        const double r = std::max(y[k] - a, 0.0) - start - integral - lam.value(k);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace loctime
