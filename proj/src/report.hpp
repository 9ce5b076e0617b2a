#pragma once

// Text formatting shared by the runner and the acceptance matrix.  Every
// number goes through fmt() so reports are byte-stable.

#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace causticlab::report {

/// 17 significant digits round-trip every double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(std::span<const double> v, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt(v[i]);
  }
  return out;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { line(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    line(cells);
  }
  const std::string& str() const { return text_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  std::size_t width_;
  std::string text_;
};

}  // namespace causticlab::report
