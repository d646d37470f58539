#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace bikerisk {

std::string read_file(const std::filesystem::path& path);

/// Truncates and writes in binary mode, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace bikerisk
