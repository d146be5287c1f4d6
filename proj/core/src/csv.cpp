#include "quasichaos/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace quasichaos::csv {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(long v) { return std::to_string(v); }

Writer::Writer(const std::string& path, const std::string& schema) : path_(path) {
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open output file: " + path);
  out_ << "# schema: " << schema << "\n";
}

void Writer::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  ++rows_;
}

void Writer::close() {
  if (out_.is_open()) out_.close();
}

}  // namespace quasichaos::csv
