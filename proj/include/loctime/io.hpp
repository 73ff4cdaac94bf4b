#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "loctime/determinacy.hpp"
#include "loctime/ensemble.hpp"
#include "loctime/path.hpp"
#include "loctime/reflected.hpp"
#include "loctime/scheme.hpp"

namespace loctime {

/// Decimal with 17 significant digits; strtod reads it back bit-exactly.
std::string format_double(double v);

/// `t,value`, one knot per row.
void write_knots_csv(const PiecewiseLinearPath& path, const std::filesystem::path& file);
PiecewiseLinearPath read_knots_csv(const std::filesystem::path& file);

/// `t,x,L,Y` over the union of the solution's knots.
void write_path_csv(const SchemeSolution& s, const std::filesystem::path& file);
void write_path_csv(const ReflectedPath& rp, const std::filesystem::path& file);

struct SolutionTable {
    std::vector<double> t, x, L, Y;
};
SolutionTable read_path_csv(const std::filesystem::path& file);

/// `t,Y,L,QV,Sigma2Int,Lambda0` on the uniform grid of step grid_dt.
void write_reflected_grid_csv(const ReflectedPath& rp, double grid_dt, double eps, const std::filesystem::path& file);

/// `path_index,method,tau,censored,L_at_T`; censored rows carry tau = inf.
void write_tau_csv(std::span<const TauSample> taus, const std::filesystem::path& file);

void write_report_json(const EnsembleReport& report, const std::filesystem::path& file);
void write_text(const std::string& text, const std::filesystem::path& file);

}  // namespace loctime
