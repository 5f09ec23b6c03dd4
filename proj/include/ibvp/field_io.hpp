#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ibvp/field.hpp"

namespace ibvp {

/// Shortest decimal text that parses back to exactly v. Integral values
/// keep a trailing ".0" so that they read as reals.
std::string format_number(double v);

/// Strict parse of a full token as a double; throws IoError otherwise.
double parse_number(const std::string& token);

// Plain-text field formats:
//   pwc <N> <level>        followed by N lines "cell_id coeff"
//   nodal <m>              followed by m^2 values, row-major
void write_pwc(std::ostream& os, const PwcField& f);
void write_nodal(std::ostream& os, const NodalField& f);
void save_pwc(const std::filesystem::path& path, const PwcField& f);
void save_nodal(const std::filesystem::path& path, const NodalField& f);

/// Reads a pwc file onto an existing partition (sizes must match).
PwcField load_pwc(const std::filesystem::path& path, const PartitionPtr& partition, Bounds bounds = {});
/// Reads a pwc file onto the uniform sqrt(N) x sqrt(N) partition of grid.
PwcField load_pwc(const std::filesystem::path& path, const GridPtr& grid, Bounds bounds = {});
PwcField read_pwc(std::istream& is, const PartitionPtr& partition, Bounds bounds = {});
NodalField read_nodal(std::istream& is);
NodalField load_nodal(const std::filesystem::path& path);

}  // namespace ibvp
