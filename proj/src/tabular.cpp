// tabular.cpp — Tabular readers/writers

#include "dforge/tabular.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dforge {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_matrix_path(const std::filesystem::path& file, const TimeGrid& grid,
                       const std::vector<Matrix>& path, const std::string& name, Index first_row) {
    if (path.empty() || Index(path.size()) != grid.size())
        throw ValidationError("write_matrix_path: path/grid size mismatch");
    std::ofstream out(file);
    if (!out) throw ValidationError("write_matrix_path: cannot open " + file.string());
    const Index rows = path[first_row].rows(), cols = path[first_row].cols();
    out << "t";
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            out << '\t' << name << r << c << "_re" << '\t' << name << r << c << "_im";
    out << '\n';
    for (Index i = first_row; i < grid.size(); ++i) {
        out << format_double(grid.time(i));
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c)
                out << '\t' << format_double(path[i](r, c).real()) << '\t'
                    << format_double(path[i](r, c).imag());
        out << '\n';
    }
}

MatrixPathData read_matrix_path(const std::filesystem::path& file, Index rows, Index cols) {
    std::ifstream in(file);
    if (!in) throw ValidationError("read_matrix_path: cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("read_matrix_path: empty file");
    MatrixPathData data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t;
        ss >> t;
        Matrix m(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) {
                double re, im;
                ss >> re >> im;
                m(r, c) = Complex(re, im);
            }
        if (!ss) throw ValidationError("read_matrix_path: malformed row in " + file.string());
        data.times.push_back(t);
        data.matrices.push_back(std::move(m));
    }
    return data;
}

void write_columns(const std::filesystem::path& file, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size() || columns.empty())
        throw ValidationError("write_columns: names/columns mismatch");
    std::ofstream out(file);
    if (!out) throw ValidationError("write_columns: cannot open " + file.string());
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "\t" : "") << names[c];
    out << '\n';
    for (std::size_t r = 0; r < columns.front().size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].size() != columns.front().size())
                throw ValidationError("write_columns: ragged columns");
            out << (c ? "\t" : "") << format_double(columns[c][r]);
        }
        out << '\n';
    }
}

} // namespace dforge
