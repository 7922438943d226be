#include "fsv/io/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "fsv/errors.hpp"

namespace fsv::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

PricePanel read_price_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input CSV: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw InvalidInput("csv-empty", "input CSV is empty: " + path);

  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "date")
    throw InvalidInput("csv-header",
                       "input CSV must start with a header row 'date,<series...>'");
  PricePanel panel;
  panel.series_names.assign(header.begin() + 1, header.end());
  const std::size_t m = panel.series_names.size();

  std::vector<std::string> dates;
  std::vector<double> values;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != m + 1)
      throw InvalidInput("csv-cells", "row " + std::to_string(row) + " has " +
                                          std::to_string(cells.size()) + " cells, expected " +
                                          std::to_string(m + 1));
    dates.push_back(cells[0]);
    for (std::size_t j = 1; j <= m; ++j) {
      if (cells[j].empty())
        throw InvalidInput("csv-missing", "missing value at row " + std::to_string(row) +
                                              ", column " + panel.series_names[j - 1]);
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(cells[j].c_str(), &end);
      if (errno != 0 || end == cells[j].c_str() || *end != '\0')
        throw InvalidInput("csv-numeric", "non-numeric value '" + cells[j] + "' at row " +
                                              std::to_string(row) + ", column " +
                                              panel.series_names[j - 1]);
      values.push_back(v);
    }
  }
  const long t_raw = static_cast<long>(dates.size());
  panel.dates = std::move(dates);
  panel.prices.resize(t_raw, static_cast<long>(m));
  for (long i = 0; i < t_raw; ++i)
    for (long j = 0; j < static_cast<long>(m); ++j)
      panel.prices(i, j) = values[static_cast<std::size_t>(i * static_cast<long>(m) + j)];
  panel.validate();
  return panel;
}

void write_price_csv(const PricePanel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV: " + path);
  out << "date";
  for (const auto& name : panel.series_names) out << ',' << name;
  out << '\n';
  char buf[40];
  for (long i = 0; i < panel.prices.rows(); ++i) {
    out << panel.dates[static_cast<std::size_t>(i)];
    for (long j = 0; j < panel.prices.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", panel.prices(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing CSV: " + path);
}

}  // namespace fsv::io
