#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cellcast {

// Plain comma split; the formats in this project never quote fields.
std::vector<std::string> split_csv(std::string_view line);
std::string_view trim(std::string_view s);
void strip_cr(std::string& line);

bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

// Shortest text that parses back to the same double.
std::string format_double(double v);

// Writes through a sibling temporary file and renames it over `path`, so a
// reader never observes a half-written file.
void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body,
                  bool binary = false);

}  // namespace cellcast
