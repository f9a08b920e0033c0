#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netsig {

// Shortest decimal string that parses back to exactly the same double.
// All numeric output goes through this, so writing and re-reading a file
// is lossless and stage composition can be byte-identical.
std::string format_double(double x);

// Strict double parse: the whole token must be consumed. Accepts the
// forms std::from_chars does (fixed, scientific, hex-free), including
// "nan" and "inf" spellings; finiteness is the caller's concern.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view s);

// Splits one CSV record on commas. No quoting: fields cannot contain
// commas, which the documented file formats guarantee.
std::vector<std::string_view> split_fields(std::string_view line);

// Splits text into lines, dropping a trailing '\r' from each (CRLF input)
// and ignoring a final empty line after a trailing newline.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// FNV-1a, used for the config hash in output-file headers.
std::uint64_t fnv1a64(std::string_view s);
std::string hex16(std::uint64_t v);

}  // namespace netsig
