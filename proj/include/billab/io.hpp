#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "billab/grid.hpp"

namespace billab {

std::string sha256_hex(const void* data, size_t len);
std::string sha256_file(const std::filesystem::path& path);

// Field file: one text header line
//   "billab-field 1 <nx> <ny> <h> <origin_x> <origin_y>\n"
// followed by nx*ny little-endian float64 node values, x fastest (row-major in y).
void write_field_file(const std::filesystem::path& path, const Field& f);
Field read_field_file(const std::filesystem::path& path, const GridPtr& grid);

// Deterministic CSV writer: fixed column order, "%.17g" for doubles.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void cell(double v);
    void cell(long long v);
    void cell(int v) { cell(static_cast<long long>(v)); }
    void cell(const std::string& s);
    void end_row();

private:
    std::FILE* f_ = nullptr;
    size_t ncols_ = 0, col_ = 0;
    void sep();
};

std::string format_double(double v); // %.17g

} // namespace billab
