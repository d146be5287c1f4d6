#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace quasichaos::csv {

std::string fmt(double v);  // shortest round-trip representation, byte-stable
std::string fmt(int v);
std::string fmt(long v);

// CSV file with a leading "# schema: ..." header line.
class Writer {
 public:
  Writer(const std::string& path, const std::string& schema);

  void row(const std::vector<std::string>& cells);
  long rows() const { return rows_; }
  const std::string& path() const { return path_; }
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  long rows_ = 0;
};

}  // namespace quasichaos::csv
