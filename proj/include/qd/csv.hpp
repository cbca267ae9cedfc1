#pragma once
#include <string>
#include <vector>

namespace qd {

// Comma-separated, header row, LF endings, 17 significant digits (lossless binary64).
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return buf_; }
    void write_file(const std::string& path) const;

    static std::string num(double v);
    static std::string num(int v);

  private:
    std::string buf_;
    size_t width_;
};

} // namespace qd
