#pragma once

#include <string>

#include "propersplit/matrix.hpp"

namespace propersplit {

/// Reads a dense matrix from disk. The format is chosen by extension:
/// .mtx is Matrix Market array format (real, general, column-major values),
/// .csv is one row per line with comma-separated entries. Throws ParseError
/// on malformed content and IoError when the file cannot be opened.
Matrix read_matrix(const std::string& path);

/// Writes a dense matrix, choosing the format by extension as in
/// read_matrix. Values are printed with %.17g so a read/write round trip
/// is exact.
void write_matrix(const std::string& path, const Matrix& m);

Matrix parse_matrix_market(const std::string& text, const std::string& origin);
Matrix parse_csv(const std::string& text, const std::string& origin);
std::string format_matrix_market(const Matrix& m);
std::string format_csv(const Matrix& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Shortest %.17g rendering used everywhere numbers are serialized.
std::string format_double(double v);

}  // namespace propersplit
