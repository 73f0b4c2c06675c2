#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigkit {

/// One path read from disk: rows are time steps, columns are channels.
struct PathData {
    std::size_t len = 0;
    int dim = 0;
    std::vector<double> values;  // (len, dim) row-major
};

/// Parses CSV with one row per time step. A first line that is not fully
/// numeric is treated as a header. Blank lines are ignored. Ragged rows
/// or non-numeric cells raise ParseError naming the line.
PathData read_path_csv(std::istream& in, const std::string& source_name);

/// File variant; missing files raise ParseError.
PathData read_path_csv_file(const std::string& path);

}  // namespace sigkit
