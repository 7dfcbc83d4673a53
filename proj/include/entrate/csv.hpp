#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace entrate {

// Deterministic formatting: %.12g, infinities spelled out. No timestamps
// anywhere, so equal inputs give byte-identical CSV.
inline std::string fmt_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvBuilder {
 public:
  CsvBuilder& field(const std::string& s) {
    if (!line_empty_) buf_ += ',';
    buf_ += s;
    line_empty_ = false;
    return *this;
  }
  CsvBuilder& field(const char* s) { return field(std::string(s)); }
  CsvBuilder& field(double v) { return field(fmt_double(v)); }
  CsvBuilder& field(bool v) { return field(std::string(v ? "true" : "false")); }
  CsvBuilder& field(std::uint64_t v) { return field(std::to_string(v)); }
  CsvBuilder& field(std::int64_t v) { return field(std::to_string(v)); }
  CsvBuilder& field(std::uint32_t v) { return field(std::to_string(v)); }

  void end_row() {
    buf_ += '\n';  // LF only
    line_empty_ = true;
  }

  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
  bool line_empty_ = true;
};

}  // namespace entrate
