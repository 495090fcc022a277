// tabular.hpp — Plain-text tabular output: one header row, then one row per
// time with row-major matrix entries as re/im pairs (17 significant digits)

#pragma once

#include <filesystem>
#include <vector>

#include "dforge/lindblad.hpp"

namespace dforge {

// Header: t <name>00_re <name>00_im <name>01_re ... (row-major).
void write_matrix_path(const std::filesystem::path& file, const TimeGrid& grid,
                       const std::vector<Matrix>& path, const std::string& name,
                       Index first_row = 0);

struct MatrixPathData {
    std::vector<double> times;
    std::vector<Matrix> matrices;
};

MatrixPathData read_matrix_path(const std::filesystem::path& file, Index rows, Index cols);

// Plain columns: t plus one named real column per series.
void write_columns(const std::filesystem::path& file, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns);

std::string format_double(double value); // %.17g, locale-independent

} // namespace dforge
