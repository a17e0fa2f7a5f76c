#pragma once

#include <iosfwd>
#include <string>

#include "aenmf/dense.hpp"
#include "aenmf/modality.hpp"

namespace aenmf {

// Layout of a matrix file. In memory, samples are always columns.
enum class Orientation { kSamplesAsRows, kSamplesAsColumns };

Orientation parse_orientation(const std::string& s);
const char* to_string(Orientation o) noexcept;

// Comma-separated numbers, one record per line. A first line with no numeric
// cell is taken as a header and skipped; blank lines are ignored. `source`
// names the input in error messages.
Matrix read_matrix(std::istream& in, Orientation orientation, const std::string& source);
Matrix load_matrix(const std::string& path, Orientation orientation);

// 17 significant digits, so a save/load round trip is exact.
void write_matrix(std::ostream& out, const Matrix& m, Orientation orientation);
void save_matrix(const std::string& path, const Matrix& m, Orientation orientation);

// One integer per line.
Labels read_labels(std::istream& in, const std::string& source);
Labels load_labels(const std::string& path);
void write_labels(std::ostream& out, const Labels& labels);
void save_labels(const std::string& path, const Labels& labels);

}  // namespace aenmf
