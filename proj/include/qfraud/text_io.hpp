#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qfraud {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// Parses a complete decimal token; std::nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);

std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view s);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace qfraud
