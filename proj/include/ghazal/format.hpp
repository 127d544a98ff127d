#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ghazal {

/// Shortest decimal that parses back to the same double. Locale-independent.
std::string format_roundtrip(double v);

/// Fixed number of significant digits (%g style). Locale-independent.
std::string format_significant(double v, int digits = 9);

/// Strict locale-independent parse; throws Error(Data) naming `context` on junk.
double parse_double(std::string_view text, std::string_view context);
long long parse_integer(std::string_view text, std::string_view context);

/// Split on runs of ASCII space/tab; empty fields are dropped.
std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim_ascii(std::string_view s);

/// Read a whole file; throws Error(Data) if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Write bytes to a file, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Split text into lines, accepting LF and CRLF, stripping a leading BOM.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace ghazal
