#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace grasp::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes; trims a trailing '\r'.
std::vector<std::string> split_record(std::string_view line);

/// Parses a decimal number occupying the whole of `text` (surrounding blanks allowed).
bool parse_double(std::string_view text, double& out);

/// Writes `path` through a sibling temporary file renamed into place on success, so a
/// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace grasp::csv
