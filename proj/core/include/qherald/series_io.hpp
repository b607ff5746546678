#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include <qherald/analysis.hpp>

namespace qherald {

/// Shortest "%.12g" rendering used by every CSV writer.
std::string format_number(double v);

/// Writes each leaf of `echo` as "# dotted.key=<json value>". Nested objects
/// become dotted keys; arrays and scalars are written as JSON.
void write_echo_comments(std::ostream &os, const nlohmann::json &echo);

/// Rebuilds the object written by write_echo_comments from the leading
/// comment block of a CSV stream. "# note: ..." lines are skipped.
nlohmann::json read_echo_comments(std::istream &is);

/// Echo comments, notes, an "axis,value" header and one row per point.
void write_series_csv(std::ostream &os, const SweepSeries &series);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

} // namespace qherald
