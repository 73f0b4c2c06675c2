#include "sigkit/path_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_cell(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(cell, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == cell.size();
}

}  // namespace

PathData read_path_csv(std::istream& in, const std::string& source_name) {
    PathData data;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const std::vector<std::string> cells = split_cells(line);
        std::vector<double> row(cells.size());
        bool all_numeric = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_cell(cells[c], row[c])) {
                all_numeric = false;
                break;
            }
        }

        if (first_content_line) {
            first_content_line = false;
            if (!all_numeric) continue;  // header row
            width = cells.size();
        } else if (!all_numeric) {
            throw ParseError(source_name + ":" + std::to_string(line_no) +
                             ": non-numeric cell in data row");
        }

        if (width == 0) width = cells.size();
        if (cells.size() != width) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(width) + " columns, got " +
                             std::to_string(cells.size()));
        }
        data.values.insert(data.values.end(), row.begin(), row.end());
        ++data.len;
    }

    if (data.len == 0) {
        throw ParseError(source_name + ": no data rows");
    }
    data.dim = static_cast<int>(width);
    return data;
}

PathData read_path_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open: " + path);
    }
    return read_path_csv(in, path);
}

}  // namespace sigkit
