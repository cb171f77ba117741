#include "bcoint/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bcoint::csv {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool is_missing_token(std::string token) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return token.empty() || token == "na" || token == "nan" || token == "null";
}

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && !token.empty();
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    auto header = split_line(line);
    if (header.empty()) throw ParseError("'" + path + "' has an empty header");

    std::vector<std::vector<std::string>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size())
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw ParseError("'" + path + "' contains no data rows");

    // A timestamp column may only be the first one: tolerate non-numeric
    // content there, and only there.
    bool drop_first = false;
    for (const auto& row : rows) {
        double ignored;
        if (!is_missing_token(row[0]) && !parse_double(row[0], ignored)) {
            drop_first = true;
            break;
        }
    }
    const int first_col = drop_first ? 1 : 0;
    const int n = static_cast<int>(header.size()) - first_col;
    if (n < 1) throw ParseError("'" + path + "' has no numeric columns");

    Eigen::MatrixXd values(static_cast<int>(rows.size()), n);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        for (int j = 0; j < n; ++j) {
            const std::string& token = rows[i][first_col + j];
            const std::string where = path + ":" + std::to_string(i + 2) + " column '" +
                                      header[first_col + j] + "'";
            if (is_missing_token(token)) throw MissingDataError("missing value at " + where);
            double parsed;
            if (!parse_double(token, parsed))
                throw ParseError("unparseable cell '" + token + "' at " + where);
            if (!std::isfinite(parsed)) throw MissingDataError("non-finite value at " + where);
            values(i, j) = parsed;
        }
    }
    std::vector<std::string> labels(header.begin() + first_col, header.end());
    return Dataset(std::move(values), std::move(labels), 0);
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string dataset_to_csv(const Dataset& data) {
    std::ostringstream out;
    for (int j = 0; j < data.n(); ++j) {
        if (j) out << ',';
        out << data.labels()[j];
    }
    out << '\n';
    for (int i = 0; i < data.T(); ++i) {
        for (int j = 0; j < data.n(); ++j) {
            if (j) out << ',';
            out << format_double(data.values()(i, j));
        }
        out << '\n';
    }
    return out.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw ParseError("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ParseError("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace bcoint::csv
