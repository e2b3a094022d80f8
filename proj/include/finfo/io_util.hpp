#ifndef FINFO_IO_UTIL_HPP
#define FINFO_IO_UTIL_HPP

#include <string>

namespace finfo {

/// Real formatted with 12 significant digits (CSV convention).
std::string format_csv(double v);

/// Real formatted with 17 significant digits (JSON convention).
std::string format_json_number(double v);

/// Write via a temp file in the same directory, then rename over the target.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace finfo

#endif
