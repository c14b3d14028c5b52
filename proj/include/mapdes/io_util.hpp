#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mapdes {

// Shortest round-trip decimal form of v (std::to_chars). Locale-independent
// and stable across runs, which is what makes output files byte-reproducible.
std::string format_double(double v);

std::string format_int(long long v);

// Strict double parse: the whole token must be consumed. Returns false on
// garbage, empty input, or a non-finite result.
bool parse_double(std::string_view token, double& out);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::string read_text_file(const std::filesystem::path& path);

// Writes to "<path>.tmp" then renames, so a crash never leaves a partial file
// at the destination.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace mapdes
