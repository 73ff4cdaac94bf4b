#pragma once

#include <optional>
#include <string>
#include <variant>

#include "loctime/path.hpp"

namespace loctime {

/// The noise coefficient sigma as a function of local time, with its
/// Lipschitz constant K and lower bound delta.
class NoiseCoefficient {
public:
    struct Constant {
        double c;
    };
    struct Affine {
        double intercept;
        double slope;
    };
    /// (1 - l)^p on [0, 1], 0 beyond. Not bounded away from zero.
    struct PowerLaw {
        double p;
    };
    /// (1 - l)^p on [0, 1 - delta], delta^p beyond.
    struct TruncatedPowerLaw {
        double p;
        double delta;
    };
    /// Piecewise-linear table over [0, l_max].
    struct Tabulated {
        PiecewiseLinearPath table;
    };
    using Kind = std::variant<Constant, Affine, PowerLaw, TruncatedPowerLaw, Tabulated>;

    static NoiseCoefficient constant(double c);
    static NoiseCoefficient affine(double intercept, double slope);
    static NoiseCoefficient power_law(double p);
    static NoiseCoefficient truncated_power_law(double p, double delta);
    static NoiseCoefficient tabulated(PiecewiseLinearPath table);

    double operator()(double ell) const;

    double lipschitz() const noexcept { return lipschitz_; }
    double lower_bound() const noexcept { return lower_bound_; }
    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;

    /// l -> sigma(l + shift). Keeps K; the lower bound can only grow.
    NoiseCoefficient shifted(double shift) const;
    double shift() const noexcept { return shift_; }

    /// Upper end of the domain for tabulated coefficients.
    std::optional<double> domain_max() const;

private:
    NoiseCoefficient(Kind kind, double lipschitz, double lower_bound)
        : kind_(std::move(kind)), lipschitz_(lipschitz), lower_bound_(lower_bound) {}

    Kind kind_;
    double lipschitz_;
    double lower_bound_;
    double shift_ = 0.0;
};

struct NoiseConstants {
    double lipschitz;
    double lower_bound;
};

NoiseConstants constants(const NoiseCoefficient& sigma);

}  // namespace loctime
