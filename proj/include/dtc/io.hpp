#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace dtc::io {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dtc::io
