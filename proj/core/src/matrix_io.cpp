#include "aenmf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "aenmf/errors.hpp"

namespace aenmf {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && !cell.empty();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void format_double(std::ostream& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.write(buf, len);
}

}  // namespace

Orientation parse_orientation(const std::string& s) {
  if (s == "rows" || s == "samples-as-rows") return Orientation::kSamplesAsRows;
  if (s == "columns" || s == "samples-as-columns") return Orientation::kSamplesAsColumns;
  throw ConfigError("unknown orientation '" + s + "' (expected 'rows' or 'columns')");
}

const char* to_string(Orientation o) noexcept {
  return o == Orientation::kSamplesAsRows ? "rows" : "columns";
}

Matrix read_matrix(std::istream& in, Orientation orientation, const std::string& source) {
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t records = 0;
  bool first = true;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    std::vector<bool> numeric(cells.size());
    bool any_numeric = false;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      numeric[j] = parse_double(cells[j], row[j]);
      any_numeric = any_numeric || numeric[j];
    }
    if (first) {
      first = false;
      width = cells.size();
      if (!any_numeric) continue;
    }
    if (cells.size() != width) {
      std::ostringstream os;
      os << source << ":" << lineno << ": expected " << width << " cells, found " << cells.size();
      throw ParseError(os.str());
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!numeric[j] || !std::isfinite(row[j])) {
        std::ostringstream os;
        os << source << ":" << lineno << ": cell " << j + 1 << " is not a finite number: '"
           << cells[j] << "'";
        throw ParseError(os.str());
      }
    }
    values.insert(values.end(), row.begin(), row.end());
    ++records;
  }
  if (records == 0) throw ParseError(source + ": no numeric rows");

  const auto r = static_cast<Eigen::Index>(records);
  const auto c = static_cast<Eigen::Index>(width);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = values[static_cast<std::size_t>(i * c + j)];
  if (orientation == Orientation::kSamplesAsRows) return m.transpose();
  return m;
}

Matrix load_matrix(const std::string& path, Orientation orientation) {
  auto in = open_in(path);
  return read_matrix(in, orientation, path);
}

void write_matrix(std::ostream& out, const Matrix& m, Orientation orientation) {
  const bool rows = orientation == Orientation::kSamplesAsRows;
  const Eigen::Index nr = rows ? m.cols() : m.rows();
  const Eigen::Index nc = rows ? m.rows() : m.cols();
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      if (j > 0) out.put(',');
      format_double(out, rows ? m(j, i) : m(i, j));
    }
    out.put('\n');
  }
}

void save_matrix(const std::string& path, const Matrix& m, Orientation orientation) {
  auto out = open_out(path);
  write_matrix(out, m, orientation);
  if (!out) throw IoError("write to '" + path + "' failed");
}

Labels read_labels(std::istream& in, const std::string& source) {
  Labels labels;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto cell = trim(line);
    if (cell.empty()) continue;
    int v = 0;
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      std::ostringstream os;
      os << source << ":" << lineno << ": not an integer label: '" << cell << "'";
      throw ParseError(os.str());
    }
    labels.push_back(v);
  }
  return labels;
}

Labels load_labels(const std::string& path) {
  auto in = open_in(path);
  return read_labels(in, path);
}

void write_labels(std::ostream& out, const Labels& labels) {
  for (int l : labels) out << l << '\n';
}

void save_labels(const std::string& path, const Labels& labels) {
  auto out = open_out(path);
  write_labels(out, labels);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace aenmf
