#pragma once

// Plain tabular output: CSV with a header row, floats at 17 significant digits.

#include <string>
#include <vector>

namespace besselforge {

std::string format_double(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  Table& row();
  Table& add(double v);
  Table& add(long long v);
  Table& add(int v) { return add(static_cast<long long>(v)); }
  Table& add(std::size_t v) { return add(static_cast<long long>(v)); }
  Table& add(const std::string& v);
  Table& add(const char* v) { return add(std::string(v)); }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  std::string csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace besselforge
