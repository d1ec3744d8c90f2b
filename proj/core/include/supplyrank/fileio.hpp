#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace supplyrank {

/// Whole-file read. Throws Error{io} naming the path.
std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partially written target. Creates parent directories. Throws Error{io}.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

} // namespace supplyrank
