#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace neurowire::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Whole file as bytes; IoError if unreadable.
std::string read_file(const std::filesystem::path& path);
/// Writes bytes, replacing the file; IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace neurowire::io
