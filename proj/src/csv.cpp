#include "qd/csv.hpp"

#include <cstdio>
#include <fstream>

#include "qd/common.hpp"

namespace qd {

static void append_row(std::string& buf, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf += ',';
        buf += cells[i];
    }
    buf += '\n';
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    if (header.empty()) throw DomainError("csv: empty header");
    append_row(buf_, header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw DomainError("csv: row width " + std::to_string(cells.size()) +
                          " != header width " + std::to_string(width_));
    append_row(buf_, cells);
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);  // binary: LF endings stay LF
    if (!f) throw DomainError("csv: cannot open " + path);
    f << buf_;
}

std::string CsvWriter::num(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    return tmp;
}

std::string CsvWriter::num(int v) { return std::to_string(v); }

} // namespace qd
