#pragma once

#include "loctime/noise.hpp"
#include "loctime/path.hpp"
#include "loctime/scheme.hpp"

namespace loctime {

/// Y = X + L: the solution pushed into [0, inf) by its local time at zero.
struct ReflectedPath {
    PiecewiseLinearPath Y;
    PiecewiseLinearPath L;
    PiecewiseLinearPath X;
    NoiseCoefficient sigma_used;
};

ReflectedPath reflect(const SchemeSolution& s);
ReflectedPath reflect(const PiecewiseLinearPath& x, const NoiseCoefficient& sigma);

/// Cumulative sum of squared increments of X over the grid 0, dt, ..., T.
PiecewiseLinearPath realized_qv(const PiecewiseLinearPath& X, double grid_dt);

/// t -> int_0^t sigma^2(L(s)) ds, two-point Gauss-Legendre on every segment
/// of L (exact when sigma is affine).
PiecewiseLinearPath sigma2_integral(const PiecewiseLinearPath& L, const NoiseCoefficient& sigma);

/// Occupation-density estimate of the local time of Y at level a:
///
///   Lambda(t, a) ~ 1/(2|W|) int_0^t 1{Y(s) in W} sigma^2(L(s)) ds,
///   W = [a - eps, a + eps] n [0, inf),
///
/// which is the estimate implied by int k(Y) d<X> = 2 int k(a) Lambda(t, a) da
/// with k the indicator of W. At a = 0 the window is one-sided, [0, eps].
/// The integral is a left-point Riemann sum on the grid.
PiecewiseLinearPath occupation_local_time(const ReflectedPath& rp, double a, double eps, double grid_dt);

/// max over the grid of
///   |(Y(t) - a)^+ - (Y(0) - a)^+ - int_0^t 1{Y > a} dY - Lambda(t, a)|,
/// with the integral taken as a left-point sum over grid increments of X
/// (the increments of L contribute nothing: L grows only where Y = 0).
double tanaka_residual(const ReflectedPath& rp, double a, double eps, double grid_dt);

}  // namespace loctime
