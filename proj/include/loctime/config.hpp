#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loctime/brownian.hpp"
#include "loctime/noise.hpp"

namespace loctime {

enum class Command { path, converge, determinacy, checks };

std::string to_string(Command c);
std::optional<Command> command_from_string(const std::string& s);

/// Driver of the path and converge commands: a sampled Brownian path, or the
/// straight line f(t) = slope * t.
struct DriverSpec {
    enum class Kind { brownian, linear } kind = Kind::brownian;
    double slope = -1.0;
};

/// One flat, fully validated run description. Defaults fill every optional
/// key; `echo` lists the resolved values in a fixed order (the worker count
/// is left out because outputs do not depend on it).
struct RunConfig {
    Command command = Command::path;
    std::uint64_t seed = 0;
    double T = 1.0;
    double dt = 1e-3;
    int refine_depth = 0;
    int n0 = 64;
    double tol = 1e-3;
    int max_doublings = 10;
    nlohmann::json sigma_descriptor;
    double x0 = 0.0;
    double p = 0.0;
    std::vector<double> lambda{0.25, 0.5, 1.0, 2.0};
    bool compare_laplace = true;
    std::size_t num_paths = 1000;
    double epsilon = 0.05;
    double grid_dt = 0.0;  // defaults to dt
    unsigned workers = 1;
    DriverSpec driver;
    std::uint64_t path_index = 0;
    std::size_t scheme_paths = 0;
    int scheme_n = 256;
    int ladder_kmax = 8;

    nlohmann::ordered_json echo;

    BrownianSampler sampler() const { return {seed, dt, T, refine_depth}; }
};

/// Parses JSON text. Unknown keys, type mismatches and violated
/// preconditions raise ParseError naming the key path.
RunConfig parse_config(const std::string& text);

/// Builds a noise coefficient from a descriptor such as
/// {"kind":"power","p":0.5}. Kinds: constant (c), affine (intercept, slope),
/// power (p), truncated_power (p, delta), tabulated (knots: [[l, v], ...]).
NoiseCoefficient make_noise(const nlohmann::json& descriptor, const std::string& key_path = "sigma");

}  // namespace loctime
