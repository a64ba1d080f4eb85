#pragma once

// Trajectory CSV files: fixed columns, blank cells where a column does not
// apply to the parameterization, 17 significant digits so values round-trip
// bit-exactly.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rvflight {

enum Column : std::size_t {
    col_t, col_r, col_v,
    col_eps_a1, col_eps_a2, col_eps_a3, col_eta_a,
    col_eps_b1, col_eps_b2, col_eps_b3, col_eta_b,
    col_x, col_y, col_z, col_vx, col_vy, col_vz,
    col_alpha, col_sigma, col_beta, col_h_mag, col_energy, col_norm_qa, col_norm_qb,
    kColumnCount
};

inline constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "t", "r", "v", "eps_a1", "eps_a2", "eps_a3", "eta_a", "eps_b1", "eps_b2", "eps_b3", "eta_b",
    "x", "y", "z", "vx", "vy", "vz", "alpha", "sigma", "beta", "h_mag", "energy", "norm_qa", "norm_qb"};

using CsvRow = std::array<std::optional<double>, kColumnCount>;

/// Shortest decimal form that parses back to the same double (17 significant digits).
std::string format_double(double x);

void write_trajectory_csv(std::ostream& out, const std::vector<CsvRow>& rows);
void write_trajectory_csv(const std::string& path, const std::vector<CsvRow>& rows);

/// Throws DomainError on a header mismatch or an unparseable cell.
std::vector<CsvRow> read_trajectory_csv(std::istream& in);
std::vector<CsvRow> read_trajectory_csv(const std::string& path);

}  // namespace rvflight
