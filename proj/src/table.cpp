#include "besselforge/table.hpp"

#include "besselforge/error.hpp"

#include <cmath>
#include <cstdio>

namespace besselforge {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

Table& Table::row() {
  if (!rows_.empty() && rows_.back().size() != columns_.size())
    throw std::logic_error("table row has the wrong number of cells");
  rows_.emplace_back();
  rows_.back().reserve(columns_.size());
  return *this;
}

Table& Table::add(double v) { return add(format_double(v)); }

Table& Table::add(long long v) { return add(std::to_string(v)); }

Table& Table::add(const std::string& v) {
  if (rows_.empty() || rows_.back().size() >= columns_.size())
    throw std::logic_error("table cell added outside a row");
  rows_.back().push_back(v);
  return *this;
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (j) out += ',';
    out += columns_[j];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ',';
      out += r[j];
    }
    out += '\n';
  }
  return out;
}

} // namespace besselforge
