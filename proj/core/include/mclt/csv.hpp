#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "mclt/error.hpp"

namespace mclt {

// Shortest round-trip decimal form; locale-independent, so re-runs are
// byte-identical.
inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) raise(errc::config_invalid, "cannot open output file: " + path);
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace mclt
