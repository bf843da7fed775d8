#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazeviz::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool icontains(std::string_view haystack, std::string_view needle);
bool iends_with(std::string_view s, std::string_view suffix) noexcept;

// Splits on a single-character delimiter; empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char delim);

// Splits text into lines, dropping a UTF-8 byte-order mark and trailing '\r'.
std::vector<std::string> split_lines(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace gazeviz::text
