#include "loctime/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "loctime/error.hpp"

namespace loctime {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& file) {
    out.flush();
    if (!out) throw IoError("write to " + file.string() + " failed");
}

std::vector<std::vector<double>> read_table(const std::filesystem::path& file, const std::string& header) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw ParseError("header", file.string() + ": expected header '" + header + "'");
    const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<std::vector<double>> cols(columns);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= columns) throw ParseError("row " + std::to_string(row), "too many columns");
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
                throw ParseError("row " + std::to_string(row), "not a number: '" + cell + "'");
            cols[c++].push_back(v);
        }
        if (c != columns) throw ParseError("row " + std::to_string(row), "too few columns");
    }
    return cols;
}

}  // namespace

void write_knots_csv(const PiecewiseLinearPath& path, const std::filesystem::path& file) {
    auto out = open_out(file);
    out << "t,value\n";
    for (std::size_t i = 0; i < path.size(); ++i)
        out << format_double(path.time(i)) << ',' << format_double(path.value(i)) << '\n';
    close_out(out, file);
}

PiecewiseLinearPath read_knots_csv(const std::filesystem::path& file) {
    auto cols = read_table(file, "t,value");
    return PiecewiseLinearPath(std::move(cols[0]), std::move(cols[1]));
}

void write_path_csv(const ReflectedPath& rp, const std::filesystem::path& file) {
    const auto ts = rp.Y.times();
    const auto x = sample_on(rp.X, ts);
    const auto L = sample_on(rp.L, ts);
    auto out = open_out(file);
    out << "t,x,L,Y\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << format_double(ts[i]) << ',' << format_double(x[i]) << ',' << format_double(L[i]) << ','
            << format_double(rp.Y.value(i)) << '\n';
    }
    close_out(out, file);
}

void write_path_csv(const SchemeSolution& s, const std::filesystem::path& file) { write_path_csv(reflect(s), file); }

SolutionTable read_path_csv(const std::filesystem::path& file) {
    auto cols = read_table(file, "t,x,L,Y");
    return {std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::move(cols[3])};
}

void write_reflected_grid_csv(const ReflectedPath& rp, double grid_dt, double eps, const std::filesystem::path& file) {
    const auto qv = realized_qv(rp.X, grid_dt);
    const auto grid = qv.times();
    const auto s2 = sample_on(sigma2_integral(rp.L, rp.sigma_used), grid);
    const auto lam = occupation_local_time(rp, 0.0, eps, grid_dt);
    const auto y = sample_on(rp.Y, grid);
    const auto l = sample_on(rp.L, grid);
    auto out = open_out(file);
    out << "t,Y,L,QV,Sigma2Int,Lambda0\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out << format_double(grid[k]) << ',' << format_double(y[k]) << ',' << format_double(l[k]) << ','
            << format_double(qv.value(k)) << ',' << format_double(s2[k]) << ',' << format_double(lam.value(k))
            << '\n';
    }
    close_out(out, file);
}

void write_tau_csv(std::span<const TauSample> taus, const std::filesystem::path& file) {
    auto out = open_out(file);
    out << "path_index,method,tau,censored,L_at_T\n";
    for (const auto& s : taus) {
        out << s.path_index << ',' << to_string(s.method) << ',' << (s.tau ? format_double(*s.tau) : "inf") << ','
            << (s.censored() ? 1 : 0) << ',' << format_double(s.L_at_T) << '\n';
    }
    close_out(out, file);
}

void write_report_json(const EnsembleReport& report, const std::filesystem::path& file) {
    write_text(to_json(report).dump(2) + "\n", file);
}

void write_text(const std::string& text, const std::filesystem::path& file) {
    auto out = open_out(file);
    out << text;
    close_out(out, file);
}

}  // namespace loctime
