#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace mlsa::cli {

// 17 significant digits, so equal doubles always print equally.
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

// Comma-separated, header row, LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace mlsa::cli
