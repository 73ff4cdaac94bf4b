#include "loctime/config.hpp"

#include <cmath>
#include <set>

#include "loctime/error.hpp"

namespace loctime {

std::string to_string(Command c) {
    switch (c) {
        case Command::path: return "path";
        case Command::converge: return "converge";
        case Command::determinacy: return "determinacy";
        case Command::checks: return "checks";
    }
    return "?";
}

std::optional<Command> command_from_string(const std::string& s) {
    for (auto c : {Command::path, Command::converge, Command::determinacy, Command::checks})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

namespace {

using json = nlohmann::json;

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ParseError(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(key, "expected a finite number");
    return v;
}

long long integer(const json& j, const std::string& key) {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long long>(v);
    }
    throw ParseError(key, "expected an integer");
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ParseError(key, what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!ok.count(it.key())) throw ParseError(key, "unknown key");
    }
}

}  // namespace

NoiseCoefficient make_noise(const json& d, const std::string& key_path) {
    require(d.is_object(), key_path, "expected an object");
    require(d.contains("kind") && d["kind"].is_string(), key_path + ".kind", "expected a string");
    const auto kind = d["kind"].get<std::string>();
    auto field = [&](const char* name) {
        const std::string key = key_path + "." + name;
        require(d.contains(name), key, "missing");
        return number(d[name], key);
    };
    try {
        if (kind == "constant") {
            only_keys(d, key_path, {"kind", "c"});
            return NoiseCoefficient::constant(field("c"));
        }
        if (kind == "affine") {
            only_keys(d, key_path, {"kind", "intercept", "slope"});
            return NoiseCoefficient::affine(field("intercept"), field("slope"));
        }
        if (kind == "power") {
            only_keys(d, key_path, {"kind", "p"});
            return NoiseCoefficient::power_law(field("p"));
        }
        if (kind == "truncated_power") {
            only_keys(d, key_path, {"kind", "p", "delta"});
            return NoiseCoefficient::truncated_power_law(field("p"), field("delta"));
        }
        if (kind == "tabulated") {
            only_keys(d, key_path, {"kind", "knots"});
            const std::string key = key_path + ".knots";
            require(d.contains("knots") && d["knots"].is_array() && !d["knots"].empty(), key,
                    "expected a nonempty array of [l, value] pairs");
            std::vector<double> ls, vs;
            for (const auto& k : d["knots"]) {
                require(k.is_array() && k.size() == 2, key, "expected [l, value] pairs");
                ls.push_back(number(k[0], key));
                vs.push_back(number(k[1], key));
            }
            return NoiseCoefficient::tabulated(PiecewiseLinearPath(std::move(ls), std::move(vs)));
        }
    } catch (const ConfigError& e) {
        throw ParseError(key_path, e.what());
    }
    throw ParseError(key_path + ".kind", "unknown sigma kind '" + kind + "'");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    require(j.is_object(), "", "configuration must be a JSON object");
    only_keys(j, "", {"command", "seed", "T", "dt", "refine_depth", "n0", "tol", "max_doublings", "sigma", "x0", "p",
                      "lambda", "compare_laplace", "num_paths", "epsilon", "grid_dt", "workers", "driver",
                      "path_index", "scheme_paths", "scheme_n", "ladder_kmax"});

    RunConfig c;
    c.sigma_descriptor = json{{"kind", "affine"}, {"intercept", 1.0}, {"slope", 1.0}};

    if (j.contains("command")) {
        require(j["command"].is_string(), "command", "expected a string");
        const auto cmd = command_from_string(j["command"].get<std::string>());
        require(cmd.has_value(), "command", "expected one of path, converge, determinacy, checks");
        c.command = *cmd;
    }
    if (j.contains("seed")) {
        const auto s = integer(j["seed"], "seed");
        require(s >= 0, "seed", "must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("T")) c.T = number(j["T"], "T");
    require(c.T > 0.0, "T", "must be > 0");
    if (j.contains("dt")) c.dt = number(j["dt"], "dt");
    require(c.dt > 0.0, "dt", "must be > 0");
    require(c.dt < c.T, "dt", "must be smaller than T");
    if (j.contains("refine_depth")) c.refine_depth = static_cast<int>(integer(j["refine_depth"], "refine_depth"));
    require(c.refine_depth >= 0 && c.refine_depth <= 20, "refine_depth", "must lie in [0, 20]");
    if (j.contains("n0")) c.n0 = static_cast<int>(integer(j["n0"], "n0"));
    require(c.n0 >= 1, "n0", "must be >= 1");
    if (j.contains("tol")) c.tol = number(j["tol"], "tol");
    require(c.tol > 0.0, "tol", "must be > 0");
    if (j.contains("max_doublings")) c.max_doublings = static_cast<int>(integer(j["max_doublings"], "max_doublings"));
    require(c.max_doublings >= 0 && c.max_doublings <= 24, "max_doublings", "must lie in [0, 24]");
    if (j.contains("x0")) c.x0 = number(j["x0"], "x0");
    require(c.x0 >= 0.0, "x0", "must be >= 0");
    if (j.contains("p")) c.p = number(j["p"], "p");
    require(c.p >= 0.0, "p", "must be >= 0");
    if (j.contains("lambda")) {
        require(j["lambda"].is_array() && !j["lambda"].empty(), "lambda", "expected a nonempty array");
        c.lambda.clear();
        for (std::size_t i = 0; i < j["lambda"].size(); ++i) {
            const std::string key = "lambda[" + std::to_string(i) + "]";
            c.lambda.push_back(number(j["lambda"][i], key));
            require(c.lambda.back() > 0.0, key, "must be > 0");
        }
    }
    if (j.contains("compare_laplace")) {
        require(j["compare_laplace"].is_boolean(), "compare_laplace", "expected a boolean");
        c.compare_laplace = j["compare_laplace"].get<bool>();
    }
    if (j.contains("num_paths")) {
        const auto n = integer(j["num_paths"], "num_paths");
        require(n >= 1, "num_paths", "must be >= 1");
        c.num_paths = static_cast<std::size_t>(n);
    }
    if (j.contains("epsilon")) c.epsilon = number(j["epsilon"], "epsilon");
    require(c.epsilon > 0.0, "epsilon", "must be > 0");
    c.grid_dt = c.dt;
    if (j.contains("grid_dt")) c.grid_dt = number(j["grid_dt"], "grid_dt");
    require(c.grid_dt > 0.0 && c.grid_dt <= c.T, "grid_dt", "must lie in (0, T]");
    if (j.contains("workers")) {
        const auto w = integer(j["workers"], "workers");
        require(w >= 1 && w <= 1024, "workers", "must lie in [1, 1024]");
        c.workers = static_cast<unsigned>(w);
    }
    if (j.contains("driver")) {
        const auto& d = j["driver"];
        require(d.is_object() && d.contains("kind") && d["kind"].is_string(), "driver.kind", "expected a string");
        const auto kind = d["kind"].get<std::string>();
        if (kind == "brownian") {
            only_keys(d, "driver", {"kind"});
            c.driver.kind = DriverSpec::Kind::brownian;
        } else if (kind == "linear") {
            only_keys(d, "driver", {"kind", "slope"});
            c.driver.kind = DriverSpec::Kind::linear;
            if (d.contains("slope")) c.driver.slope = number(d["slope"], "driver.slope");
        } else {
            throw ParseError("driver.kind", "expected brownian or linear");
        }
    }
    if (j.contains("path_index")) {
        const auto i = integer(j["path_index"], "path_index");
        require(i >= 0, "path_index", "must be >= 0");
        c.path_index = static_cast<std::uint64_t>(i);
    }
    if (j.contains("scheme_paths")) {
        const auto n = integer(j["scheme_paths"], "scheme_paths");
        require(n >= 0, "scheme_paths", "must be >= 0");
        c.scheme_paths = static_cast<std::size_t>(n);
    }
    if (j.contains("scheme_n")) c.scheme_n = static_cast<int>(integer(j["scheme_n"], "scheme_n"));
    require(c.scheme_n >= 1, "scheme_n", "must be >= 1");
    if (j.contains("ladder_kmax")) c.ladder_kmax = static_cast<int>(integer(j["ladder_kmax"], "ladder_kmax"));
    require(c.ladder_kmax >= 2, "ladder_kmax", "must be >= 2");

    if (j.contains("sigma")) c.sigma_descriptor = j["sigma"];
    const auto sigma = make_noise(c.sigma_descriptor, "sigma");
    if (c.command == Command::path || c.command == Command::converge)
        require(sigma.lower_bound() > 0.0, "sigma", "the scheme needs sigma bounded away from zero");

    if (c.command == Command::determinacy && c.compare_laplace && j.contains("lambda"))
        require(c.p < 1.0, "lambda", "Laplace comparison needs p < 1 (tau_p is infinite for p >= 1); "
                                     "set compare_laplace to false");

    require(j.contains("command"), "command", "missing required key");
    require(j.contains("seed"), "seed", "missing required key");

    auto& e = c.echo;
    e["command"] = to_string(c.command);
    e["master_seed"] = c.seed;
    e["T"] = c.T;
    e["dt"] = c.dt;
    e["refine_depth"] = c.refine_depth;
    e["n0"] = c.n0;
    e["tol"] = c.tol;
    e["max_doublings"] = c.max_doublings;
    e["sigma"] = nlohmann::ordered_json::parse(c.sigma_descriptor.dump());
    e["x0"] = c.x0;
    e["p"] = c.p;
    e["lambda"] = c.lambda;
    e["compare_laplace"] = c.compare_laplace;
    e["num_paths"] = c.num_paths;
    e["epsilon"] = c.epsilon;
    e["grid_dt"] = c.grid_dt;
    e["driver"] = c.driver.kind == DriverSpec::Kind::brownian
                      ? nlohmann::ordered_json{{"kind", "brownian"}}
                      : nlohmann::ordered_json{{"kind", "linear"}, {"slope", c.driver.slope}};
    e["path_index"] = c.path_index;
    e["scheme_paths"] = c.scheme_paths;
    e["scheme_n"] = c.scheme_n;
    e["ladder_kmax"] = c.ladder_kmax;
    return c;
}

}  // namespace loctime
