#include "output.hpp"

#include <cstdio>

#include "mlsa/errors.hpp"

namespace mlsa::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string render(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  return std::get<std::string>(c);
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("output: cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), out_(open_or_throw(path)), columns_(header.size()) {
  bool first = true;
  for (const auto& h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) { row(std::vector<Cell>(cells)); }

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("csv row width does not match the header of " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << render(cells[i]);
  }
  out_ << '\n';
  if (!out_) throw ValidationError("output: write to '" + path_.string() + "' failed");
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto out = open_or_throw(path);
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("output: write to '" + path.string() + "' failed");
}

}  // namespace mlsa::cli
