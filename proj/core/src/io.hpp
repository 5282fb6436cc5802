#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memeground::detail {

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::byte> read_binary_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename. Throws LakeError.
void write_file(const std::filesystem::path& path, std::string_view contents);
void write_file(const std::filesystem::path& path, std::span<const std::byte> contents);

/// Splits on '\n', dropping one trailing '\r' per line and the empty piece
/// after a final newline.
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string_view> split_tabs(std::string_view line);

bool is_blank(std::string_view line) noexcept;
std::string to_lower(std::string_view text);

}  // namespace memeground::detail
